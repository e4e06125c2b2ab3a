// Typed client for the session service. The studio never computes a
// number itself: everything rendered comes back through these calls.

export interface ConsistencyPayload {
  lambda_max: number;
  ci: number;
  ri: number | null;
  cr: number | null;
  intransitivity: number;
  per_pair_intransitivity: number;
  delta: number;
  acceptable: boolean;
  n: number;
}

export interface HintPayload {
  row: number;
  col: number;
  current_value: number;
  suggested_value: number;
}

export interface ReportPayload {
  consistency: ConsistencyPayload;
  eigen_weights: number[];
  llsm_weights: number[];
  deviation: number[][];
  hint: HintPayload | null;
}

export interface SessionRecord {
  id: string;
  mode: 'PAIRWISE' | 'COIN';
  n: number;
  labels: string[];
  delta: number;
  created: string;
  updated: string;
  revision: number;
  judgments?: [number, number, number][];
  prices?: number[];
}

export interface SessionSnapshot {
  session: SessionRecord;
  status: 'COMPLETE' | 'INCOMPLETE';
  progress: { set: number; total: number };
  matrix: number[][];
  report: ReportPayload | null;
}

export interface WhatIfResponse {
  session_id: string;
  revision: number;
  row: number;
  col: number;
  value: number;
  report: ReportPayload;
}

export interface AggregateResponse {
  prices: number[];
  matrix: number[][];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

export type Transport = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly transport: Transport = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.transport(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        // keep raw text
      }
      throw new ApiError(response.status, String(detail));
    }
    return JSON.parse(text) as T;
  }

  createSession(body: {
    mode: 'PAIRWISE' | 'COIN';
    n: number;
    labels?: string[];
    delta?: number;
  }): Promise<SessionSnapshot> {
    return this.request('POST', '/sessions', body);
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request('GET', `/sessions/${id}`);
  }

  submitJudgment(
    id: string,
    body: { row: number; col: number; value: number; reciprocal_fill: boolean; revision: number },
  ): Promise<SessionSnapshot> {
    return this.request('PUT', `/sessions/${id}/judgments`, body);
  }

  putCoin(id: string, body: { prices: number[]; revision: number }): Promise<SessionSnapshot> {
    return this.request('PUT', `/sessions/${id}/coin`, body);
  }

  whatif(id: string, body: { row: number; col: number; value: number }): Promise<WhatIfResponse> {
    return this.request('POST', `/sessions/${id}/whatif`, body);
  }

  aggregatePanel(body: { importance: number[]; vectors: number[][] }): Promise<AggregateResponse> {
    return this.request('POST', '/panels/aggregate', body);
  }
}
