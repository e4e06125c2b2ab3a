// Central store for the studio. Every displayed figure is copied out of
// the last service response; the one sanctioned client-side computation
// is re-comparing an already-served sqrt(I) against the local delta
// slider.

import {
  ApiError,
  ReportPayload,
  ServiceClient,
  SessionSnapshot,
  WhatIfResponse,
} from './api.js';

export interface PendingEdit {
  row: number;
  col: number;
  raw: string;
  error: string | null;
}

export interface WhatIfPreview {
  row: number;
  col: number;
  value: number;
  before: number; // served sqrt(I) before
  after: number;  // served sqrt(I) as-if applied
}

export interface StudioState {
  snapshot: SessionSnapshot | null;
  lastReport: ReportPayload | null;
  pendingEdit: PendingEdit | null;
  errorBanner: string | null;
  conflict: boolean; // stale revision detected; offer reload
  autoReciprocal: boolean;
  delta: number; // slider value; compared client-side against served sqrt(I)
  whatifPreview: WhatIfPreview | null;
  busy: boolean;
}

type Listener = (state: StudioState) => void;

export class StudioStore {
  private state: StudioState = {
    snapshot: null,
    lastReport: null,
    pendingEdit: null,
    errorBanner: null,
    conflict: false,
    autoReciprocal: true,
    delta: 0.1,
    whatifPreview: null,
    busy: false,
  };

  private listeners: Listener[] = [];
  private inFlight = 0;
  private waiters: (() => void)[] = [];

  constructor(private readonly client: ServiceClient) {}

  getState(): StudioState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** Resolves once no request is in flight; for scripted tests. */
  settled(): Promise<void> {
    if (this.inFlight === 0) return Promise.resolve();
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  private patch(partial: Partial<StudioState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  private applySnapshot(snapshot: SessionSnapshot): void {
    const isNewSession = this.state.snapshot?.session.id !== snapshot.session.id;
    this.patch({
      snapshot,
      lastReport: snapshot.report ?? this.state.lastReport,
      conflict: false,
      errorBanner: null,
      // adopt the session's delta once; afterwards the slider is local
      delta: isNewSession ? snapshot.session.delta : this.state.delta,
    });
  }

  /** Run one store action; settled() resolves only after every patch
   *  the action makes has been applied. */
  private async track(work: () => Promise<void>): Promise<void> {
    this.inFlight += 1;
    this.patch({ busy: true });
    try {
      await work();
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        this.patch({ conflict: true });
      } else {
        this.patch({ errorBanner: error instanceof Error ? error.message : String(error) });
      }
    } finally {
      this.inFlight -= 1;
      if (this.inFlight === 0) {
        this.patch({ busy: false });
        this.waiters.splice(0).forEach((resolve) => resolve());
      }
    }
  }

  async createSession(body: {
    mode: 'PAIRWISE' | 'COIN';
    n: number;
    labels?: string[];
    delta?: number;
  }): Promise<void> {
    await this.track(async () => {
      const snapshot = await this.client.createSession(body);
      this.patch({ lastReport: null, whatifPreview: null });
      this.applySnapshot(snapshot);
    });
  }

  async reload(): Promise<void> {
    const id = this.state.snapshot?.session.id;
    if (!id) return;
    await this.track(async () => {
      this.applySnapshot(await this.client.getSession(id));
    });
  }

  setAutoReciprocal(value: boolean): void {
    this.patch({ autoReciprocal: value });
  }

  setDelta(value: number): void {
    // client-side recompare of two known numbers; no request
    this.patch({ delta: value });
  }

  /** Inline validation; a bad value never leaves the browser. */
  stageEdit(row: number, col: number, raw: string): PendingEdit {
    const value = Number(raw);
    const error =
      raw.trim() === '' || !Number.isFinite(value)
        ? 'enter a number'
        : value <= 0
          ? 'judgments must be > 0'
          : null;
    const edit = { row, col, raw, error };
    this.patch({ pendingEdit: edit });
    return edit;
  }

  async commitEdit(row: number, col: number, raw: string): Promise<void> {
    const edit = this.stageEdit(row, col, raw);
    const snapshot = this.state.snapshot;
    if (edit.error || !snapshot) return; // invalid input: no request
    await this.track(async () => {
      const updated = await this.client.submitJudgment(snapshot.session.id, {
        row,
        col,
        value: Number(raw),
        reciprocal_fill: this.state.autoReciprocal,
        revision: snapshot.session.revision,
      });
      this.patch({ pendingEdit: null, whatifPreview: null });
      this.applySnapshot(updated);
    });
  }

  async commitPrices(prices: number[]): Promise<void> {
    const snapshot = this.state.snapshot;
    if (!snapshot) return;
    if (prices.some((p) => !Number.isFinite(p) || p <= 0)) {
      this.patch({ errorBanner: 'prices must be > 0' });
      return;
    }
    await this.track(async () => {
      this.applySnapshot(
        await this.client.putCoin(snapshot.session.id, {
          prices,
          revision: snapshot.session.revision,
        }),
      );
    });
  }

  /** Preview the served hint through whatif; numbers shown are both served. */
  async previewHint(): Promise<void> {
    const snapshot = this.state.snapshot;
    const report = this.state.lastReport;
    const hint = report?.hint;
    if (!snapshot || !hint || !report) return;
    await this.track(async () => {
      const response: WhatIfResponse = await this.client.whatif(snapshot.session.id, {
        row: hint.row,
        col: hint.col,
        value: hint.suggested_value,
      });
      this.patch({
        whatifPreview: {
          row: hint.row,
          col: hint.col,
          value: hint.suggested_value,
          before: report.consistency.intransitivity,
          after: response.report.consistency.intransitivity,
        },
      });
    });
  }

  async applyPreview(): Promise<void> {
    const preview = this.state.whatifPreview;
    if (!preview) return;
    await this.commitEdit(preview.row, preview.col, String(preview.value));
  }

  dismissPreview(): void {
    this.patch({ whatifPreview: null });
  }

  clearError(): void {
    this.patch({ errorBanner: null });
  }
}
