// Consistency gauge and revision flow. Both figures (sqrt(I) and CR)
// are rendered verbatim from the last service report; the only local
// comparison is served sqrt(I) against the local delta slider, which
// re-renders without any request.

import { StudioStore } from './state.js';

export function renderGauge(root: HTMLElement, store: StudioStore): void {
  const state = store.getState();
  root.innerHTML = '';
  const snapshot = state.snapshot;
  if (!snapshot) return;

  if (snapshot.status !== 'COMPLETE' || !state.lastReport) {
    const progress = document.createElement('p');
    progress.className = 'gauge-progress';
    progress.textContent = `progress: ${snapshot.progress.set}/${snapshot.progress.total} judgments`;
    root.appendChild(progress);
    return;
  }

  const consistency = state.lastReport.consistency;
  const value = consistency.intransitivity;
  const acceptable = value < state.delta; // recompare of two served/known numbers

  const intrans = document.createElement('p');
  intrans.innerHTML =
    `intransitivity &radic;I = <strong data-gauge="intransitivity">${value.toFixed(6)}</strong> ` +
    `vs &delta; = <span data-gauge="delta">${state.delta.toFixed(3)}</span> &mdash; ` +
    `<span class="${acceptable ? 'verdict-ok' : 'verdict-bad'}" data-gauge="verdict">` +
    `${acceptable ? 'acceptable' : 'needs revision'}</span>`;
  root.appendChild(intrans);

  const cr = document.createElement('p');
  if (consistency.cr === null) {
    cr.innerHTML = 'CR: <span data-gauge="cr">n/a (non-reciprocal)</span>';
  } else {
    const below = consistency.cr < 0.1;
    cr.innerHTML =
      `CR = <strong data-gauge="cr">${consistency.cr.toFixed(6)}</strong> ` +
      `vs the conventional 10% &mdash; <span data-gauge="cr-verdict">` +
      `${below ? 'below' : 'above'}</span>`;
  }
  root.appendChild(cr);

  const slider = document.createElement('input');
  slider.type = 'range';
  slider.min = '0.01';
  slider.max = '0.5';
  slider.step = '0.01';
  slider.value = String(state.delta);
  slider.dataset.gauge = 'delta-slider';
  slider.addEventListener('input', () => {
    store.setDelta(Number(slider.value));
  });
  root.appendChild(slider);

  renderReviseControls(root, store);
}

function renderReviseControls(root: HTMLElement, store: StudioStore): void {
  const state = store.getState();
  const hint = state.lastReport?.hint;
  if (!hint) {
    const done = document.createElement('p');
    done.dataset.gauge = 'no-hint';
    done.textContent = 'nothing to revise: matrix is transitive';
    root.appendChild(done);
    return;
  }

  const box = document.createElement('div');
  box.className = 'revise-box';
  const text = document.createElement('p');
  text.innerHTML =
    `largest residual at (${hint.row + 1}, ${hint.col + 1}): ` +
    `<span data-revise="current">${hint.current_value}</span> &rarr; ` +
    `suggested <span data-revise="suggested">${hint.suggested_value}</span>`;
  box.appendChild(text);

  if (state.whatifPreview) {
    const preview = state.whatifPreview;
    const compare = document.createElement('p');
    compare.innerHTML =
      `&radic;I <span data-revise="before">${preview.before.toFixed(6)}</span> &rarr; ` +
      `<span data-revise="after">${preview.after.toFixed(6)}</span> after revision`;
    box.appendChild(compare);

    const apply = document.createElement('button');
    apply.textContent = 'apply revision';
    apply.dataset.revise = 'apply';
    apply.addEventListener('click', () => {
      void store.applyPreview();
    });
    box.appendChild(apply);

    const dismiss = document.createElement('button');
    dismiss.textContent = 'keep as is';
    dismiss.dataset.revise = 'dismiss';
    dismiss.addEventListener('click', () => store.dismissPreview());
    box.appendChild(dismiss);
  } else {
    const previewButton = document.createElement('button');
    previewButton.textContent = 'preview revision';
    previewButton.dataset.revise = 'preview';
    previewButton.addEventListener('click', () => {
      void store.previewHint();
    });
    box.appendChild(previewButton);
  }
  root.appendChild(box);
}
