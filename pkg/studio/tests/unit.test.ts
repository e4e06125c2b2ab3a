// Transport-interception tests: a fake transport stands in for the
// service, proving that the studio validates locally before any request
// and renders served numbers verbatim.

import { beforeEach, describe, expect, it } from 'vitest';

import { ServiceClient, SessionSnapshot, Transport } from '../src/api.js';
import { PanelView } from '../src/coin.js';
import { mountStudio, Studio } from '../src/main.js';

function snapshotFixture(overrides: Partial<SessionSnapshot> = {}): SessionSnapshot {
  return {
    session: {
      id: 'abc',
      mode: 'PAIRWISE',
      n: 2,
      labels: ['x', 'y'],
      delta: 0.1,
      created: 't0',
      updated: 't0',
      revision: 2,
      judgments: [
        [0, 1, 2.1],
        [1, 0, 0.55],
      ],
    },
    status: 'COMPLETE',
    progress: { set: 2, total: 2 },
    matrix: [
      [1, 2.1],
      [0.55, 1],
    ],
    report: {
      consistency: {
        lambda_max: 2.0,
        ci: 0.0,
        ri: null,
        cr: null,
        intransitivity: 0.123456,
        per_pair_intransitivity: 0.0873,
        delta: 0.1,
        acceptable: false,
        n: 2,
      },
      eigen_weights: [0.66, 0.34],
      llsm_weights: [1.4, 0.715],
      deviation: [
        [0, 0.0872],
        [0.0872, 0],
      ],
      hint: { row: 0, col: 1, current_value: 2.1, suggested_value: 1.954 },
    },
    ...overrides,
  };
}

interface FakeBackend {
  transport: Transport;
  calls: { url: string; method: string; body: unknown }[];
  respond: (status: number, payload: unknown) => void;
}

function fakeBackend(): FakeBackend {
  const queue: { status: number; payload: unknown }[] = [];
  const calls: FakeBackend['calls'] = [];
  return {
    calls,
    respond(status, payload) {
      queue.push({ status, payload });
    },
    transport: (url, init) => {
      calls.push({
        url,
        method: init?.method ?? 'GET',
        body: init?.body ? JSON.parse(String(init.body)) : undefined,
      });
      const next = queue.shift() ?? { status: 500, payload: { detail: 'no canned response' } };
      return Promise.resolve(
        new Response(JSON.stringify(next.payload), {
          status: next.status,
          headers: { 'content-type': 'application/json' },
        }),
      );
    },
  };
}

describe('studio with an intercepted transport', () => {
  let backend: FakeBackend;
  let studio: Studio;
  let root: HTMLElement;

  beforeEach(async () => {
    document.body.innerHTML = '<div id="root"></div>';
    root = document.getElementById('root') as HTMLElement;
    backend = fakeBackend();
    studio = mountStudio(root, new ServiceClient('http://service.test', backend.transport));
    backend.respond(200, snapshotFixture());
    await studio.store.createSession({ mode: 'PAIRWISE', n: 2 });
    await studio.store.settled();
  });

  it('renders the served intransitivity verbatim', () => {
    const gauge = root.querySelector('[data-gauge="intransitivity"]');
    expect(gauge?.textContent).toBe('0.123456');
    // exactly one request (the create) produced every displayed number
    expect(backend.calls.length).toBe(1);
  });

  it('blocks nonpositive judgments client-side: no request leaves the browser', async () => {
    const before = backend.calls.length;
    const input = root.querySelector('input[data-cell="0,1"]') as HTMLInputElement;
    input.value = '-1';
    input.dispatchEvent(new Event('change', { bubbles: true }));
    await studio.store.settled();
    expect(backend.calls.length).toBe(before); // nothing sent
    const note = root.querySelector('[data-error-for="0,1"]');
    expect(note?.textContent).toContain('> 0');
  });

  it('delta slider recompares the served value without any request', async () => {
    const before = backend.calls.length;
    expect(root.querySelector('[data-gauge="verdict"]')?.textContent).toBe('needs revision');
    studio.store.setDelta(0.2); // above the served 0.123456
    await studio.store.settled();
    expect(root.querySelector('[data-gauge="verdict"]')?.textContent).toBe('acceptable');
    expect(backend.calls.length).toBe(before);
  });

  it('stale revision surfaces a reload banner, never a silent overwrite', async () => {
    backend.respond(409, { detail: 'stale revision; session is at 3' });
    const input = root.querySelector('input[data-cell="0,1"]') as HTMLInputElement;
    input.value = '3.0';
    input.dispatchEvent(new Event('change', { bubbles: true }));
    await studio.store.settled();
    expect(root.querySelector('[data-banner="conflict"]')).not.toBeNull();
    // reload fetches the authoritative state
    backend.respond(200, snapshotFixture());
    (root.querySelector('[data-banner="reload"]') as HTMLButtonElement).click();
    await studio.store.settled();
    expect(root.querySelector('[data-banner="conflict"]')).toBeNull();
  });

  it('judgment commits carry the current revision and reciprocal flag', async () => {
    studio.store.setAutoReciprocal(false);
    backend.respond(200, snapshotFixture());
    const input = root.querySelector('input[data-cell="0,1"]') as HTMLInputElement;
    input.value = '2.5';
    input.dispatchEvent(new Event('change', { bubbles: true }));
    await studio.store.settled();
    const call = backend.calls.at(-1)!;
    expect(call.method).toBe('PUT');
    expect(call.body).toEqual({
      row: 0,
      col: 1,
      value: 2.5,
      reciprocal_fill: false,
      revision: 2,
    });
  });

  it('whatif preview shows served before/after values', async () => {
    backend.respond(200, {
      session_id: 'abc',
      revision: 2,
      row: 0,
      col: 1,
      value: 1.954,
      report: {
        ...snapshotFixture().report,
        consistency: { ...snapshotFixture().report!.consistency, intransitivity: 0.01 },
      },
    });
    (root.querySelector('[data-revise="preview"]') as HTMLButtonElement).click();
    await studio.store.settled();
    expect(root.querySelector('[data-revise="before"]')?.textContent).toBe('0.123456');
    expect(root.querySelector('[data-revise="after"]')?.textContent).toBe('0.010000');
  });
});

describe('panel aggregation view', () => {
  it('blocks importances that do not sum to 1 before any request', async () => {
    const backend = fakeBackend();
    const view = new PanelView(new ServiceClient('http://service.test', backend.transport));
    await view.submit({ importance: [0.7, 0.7], vectors: [[1, 2], [1, 2]] });
    expect(view.error).toContain('sum to 1');
    expect(backend.calls.length).toBe(0);
  });

  it('displays the served merged prices', async () => {
    const backend = fakeBackend();
    backend.respond(200, { prices: [1, 4, 4], matrix: [[1, 0.25, 0.25], [4, 1, 1], [4, 1, 1]] });
    const view = new PanelView(new ServiceClient('http://service.test', backend.transport));
    await view.submit({ importance: [0.5, 0.5], vectors: [[1, 2, 4], [1, 8, 4]] });
    expect(view.error).toBeNull();
    document.body.innerHTML = '<div id="p"></div>';
    view.render(document.getElementById('p') as HTMLElement);
    const out = document.querySelector('[data-panel="result"]') as HTMLElement;
    expect(JSON.parse(out.dataset.prices as string)).toEqual([1, 4, 4]);
  });
});
