// Deviation heatmap: cell shading tracks |residual| from the served
// deviation matrix; the numbers in the tooltips are served verbatim.

import { StudioStore } from './state.js';

export function renderHeatmap(root: HTMLElement, store: StudioStore): void {
  const state = store.getState();
  root.innerHTML = '';
  const report = state.lastReport;
  const snapshot = state.snapshot;
  if (!report || !snapshot || snapshot.status !== 'COMPLETE') return;

  const residuals = report.deviation;
  const n = residuals.length;
  let peak = 0;
  for (const row of residuals) for (const v of row) peak = Math.max(peak, Math.abs(v));

  const table = document.createElement('table');
  table.className = 'deviation-heatmap';
  for (let i = 0; i < n; i += 1) {
    const row = table.insertRow();
    for (let j = 0; j < n; j += 1) {
      const cell = row.insertCell();
      const magnitude = Math.abs(residuals[i][j]);
      const intensity = peak > 0 ? magnitude / peak : 0; // shading only
      cell.style.backgroundColor = `rgba(200, 60, 40, ${intensity.toFixed(3)})`;
      cell.dataset.residual = String(residuals[i][j]);
      cell.title = `R(${i + 1}, ${j + 1}) = ${residuals[i][j]}`;
    }
  }
  root.appendChild(table);
}
