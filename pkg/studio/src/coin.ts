// Coin mode: n price inputs against a private unit, the derived
// always-coherent matrix shown read-only, plus the panel aggregation
// view. Importances that do not sum to 1 are blocked client-side; the
// aggregated prices displayed come from the service.

import { AggregateResponse, ServiceClient } from './api.js';
import { StudioStore } from './state.js';

export function renderCoinPanel(root: HTMLElement, store: StudioStore): void {
  const state = store.getState();
  root.innerHTML = '';
  const snapshot = state.snapshot;
  if (!snapshot || snapshot.session.mode !== 'COIN') return;

  const n = snapshot.session.n;
  const prices = snapshot.session.prices ?? [];

  const form = document.createElement('div');
  form.className = 'coin-form';
  const inputs: HTMLInputElement[] = [];
  for (let i = 0; i < n; i += 1) {
    const label = document.createElement('label');
    label.textContent = `${snapshot.session.labels[i]} `;
    const input = document.createElement('input');
    input.type = 'text';
    input.value = String(prices[i]);
    input.dataset.price = String(i);
    inputs.push(input);
    label.appendChild(input);
    form.appendChild(label);
  }
  const submit = document.createElement('button');
  submit.textContent = 'update prices';
  submit.dataset.coin = 'submit';
  submit.addEventListener('click', () => {
    void store.commitPrices(inputs.map((input) => Number(input.value)));
  });
  form.appendChild(submit);
  root.appendChild(form);

  const counter = document.createElement('p');
  counter.dataset.coin = 'counter';
  counter.textContent = `${n} inputs replace ${(n * (n - 1)) / 2} pairwise comparisons`;
  root.appendChild(counter);

  const report = state.lastReport;
  if (report && report.consistency.cr === 0 && report.consistency.intransitivity <= 1e-9) {
    const badge = document.createElement('span');
    badge.className = 'badge-consistent';
    badge.dataset.coin = 'badge';
    badge.textContent = 'perfectly consistent';
    root.appendChild(badge);
  }

  const matrix = document.createElement('table');
  matrix.className = 'coin-matrix';
  for (const rowValues of snapshot.matrix) {
    const row = matrix.insertRow();
    for (const value of rowValues) {
      const cell = row.insertCell();
      cell.textContent = formatShort(value);
      cell.dataset.derived = String(value);
    }
  }
  root.appendChild(matrix);
}

export interface PanelDraft {
  importance: number[];
  vectors: number[][];
}

export class PanelView {
  result: AggregateResponse | null = null;
  error: string | null = null;

  constructor(private readonly client: ServiceClient) {}

  /** Client-side gate: importances must sum to 1 before any request. */
  validate(draft: PanelDraft): string | null {
    if (draft.importance.some((a) => !Number.isFinite(a) || a < 0)) {
      return 'importances must be nonnegative numbers';
    }
    const total = draft.importance.reduce((s, a) => s + a, 0);
    if (Math.abs(total - 1) > 1e-9) {
      return `importances must sum to 1 (got ${total})`;
    }
    if (draft.vectors.length !== draft.importance.length) {
      return 'one price vector per decision-maker';
    }
    return null;
  }

  async submit(draft: PanelDraft): Promise<void> {
    this.error = this.validate(draft);
    if (this.error) return;
    try {
      this.result = await this.client.aggregatePanel(draft);
    } catch (error) {
      this.error = error instanceof Error ? error.message : String(error);
    }
  }

  render(root: HTMLElement): void {
    root.innerHTML = '';
    if (this.error) {
      const banner = document.createElement('p');
      banner.className = 'panel-error';
      banner.dataset.panel = 'error';
      banner.textContent = this.error;
      root.appendChild(banner);
    }
    if (this.result) {
      const out = document.createElement('p');
      out.dataset.panel = 'result';
      out.textContent = `merged prices: ${this.result.prices.map(formatShort).join(', ')}`;
      out.dataset.prices = JSON.stringify(this.result.prices);
      root.appendChild(out);
    }
  }
}

function formatShort(value: number): string {
  const rounded = Number(value.toPrecision(6));
  return String(rounded);
}
