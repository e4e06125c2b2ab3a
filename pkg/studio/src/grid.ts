// Editable judgment grid. Commits go to the service with the current
// revision; the mirror cell repaints from the response matrix, never
// from local arithmetic. In reciprocal mode only the upper triangle is
// editable; explicit mode exposes both triangles for margins.

import { StudioStore } from './state.js';

export function renderGrid(root: HTMLElement, store: StudioStore): void {
  const state = store.getState();
  const snapshot = state.snapshot;
  root.innerHTML = '';
  if (!snapshot || snapshot.session.mode !== 'PAIRWISE') return;

  const { matrix, session } = snapshot;
  const n = session.n;
  const judged = new Set((session.judgments ?? []).map(([r, c]) => `${r},${c}`));

  const table = document.createElement('table');
  table.className = 'judgment-grid';

  const head = table.insertRow();
  head.insertCell().textContent = '';
  for (let j = 0; j < n; j += 1) {
    const cell = head.insertCell();
    cell.textContent = session.labels[j];
    cell.className = 'grid-label';
  }

  for (let i = 0; i < n; i += 1) {
    const row = table.insertRow();
    const label = row.insertCell();
    label.textContent = session.labels[i];
    label.className = 'grid-label';
    for (let j = 0; j < n; j += 1) {
      const cell = row.insertCell();
      if (i === j) {
        cell.textContent = '1';
        cell.className = 'grid-diagonal';
        continue;
      }
      const mirrorOnly = state.autoReciprocal && i > j;
      if (mirrorOnly) {
        cell.textContent = judged.has(`${i},${j}`) ? formatEntry(matrix[i][j]) : '';
        cell.className = 'grid-mirror';
        cell.dataset.cell = `${i},${j}`;
        continue;
      }
      const input = document.createElement('input');
      input.type = 'text';
      input.dataset.cell = `${i},${j}`;
      input.value = judged.has(`${i},${j}`) ? formatEntry(matrix[i][j]) : '';
      if (state.pendingEdit && state.pendingEdit.row === i && state.pendingEdit.col === j) {
        input.value = state.pendingEdit.raw;
      }
      input.addEventListener('change', () => {
        void store.commitEdit(i, j, input.value);
      });
      cell.appendChild(input);
      const note = document.createElement('span');
      note.className = 'cell-error';
      note.dataset.errorFor = `${i},${j}`;
      if (state.pendingEdit?.error && state.pendingEdit.row === i && state.pendingEdit.col === j) {
        note.textContent = state.pendingEdit.error;
      }
      cell.appendChild(note);
    }
  }
  root.appendChild(table);

  const progress = document.createElement('p');
  progress.className = 'grid-progress';
  progress.textContent =
    snapshot.status === 'COMPLETE'
      ? 'all judgments recorded'
      : `${snapshot.progress.set} of ${snapshot.progress.total} cells set`;
  root.appendChild(progress);
}

function formatEntry(value: number): string {
  return String(value);
}
