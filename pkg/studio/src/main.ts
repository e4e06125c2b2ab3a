// Studio wiring: session form, grid, gauge, heatmap, coin panel, and
// the conflict/error banners. mountStudio is also the entry point used
// by the scripted tests.

import { ServiceClient } from './api.js';
import { PanelView, renderCoinPanel } from './coin.js';
import { renderGauge } from './gauge.js';
import { renderGrid } from './grid.js';
import { renderHeatmap } from './heatmap.js';
import { StudioStore } from './state.js';

export interface Studio {
  store: StudioStore;
  client: ServiceClient;
  panel: PanelView;
}

export function mountStudio(root: HTMLElement, client: ServiceClient): Studio {
  const store = new StudioStore(client);
  const panel = new PanelView(client);

  root.innerHTML = `
    <header><h1>judgment studio</h1></header>
    <div data-region="banner"></div>
    <section data-region="setup">
      <select data-setup="mode">
        <option value="PAIRWISE">pairwise grid</option>
        <option value="COIN">coin prices</option>
      </select>
      <input data-setup="n" type="number" min="2" value="3" />
      <label><input data-setup="reciprocal" type="checkbox" checked /> reciprocal fill</label>
      <button data-setup="create">new session</button>
    </section>
    <section data-region="grid"></section>
    <section data-region="coin"></section>
    <section data-region="gauge"></section>
    <section data-region="heatmap"></section>
    <section data-region="panel"></section>
  `;

  const region = (name: string): HTMLElement =>
    root.querySelector(`[data-region="${name}"]`) as HTMLElement;

  const modeSelect = root.querySelector('[data-setup="mode"]') as HTMLSelectElement;
  const sizeInput = root.querySelector('[data-setup="n"]') as HTMLInputElement;
  const reciprocalBox = root.querySelector('[data-setup="reciprocal"]') as HTMLInputElement;
  const createButton = root.querySelector('[data-setup="create"]') as HTMLButtonElement;

  reciprocalBox.addEventListener('change', () => {
    store.setAutoReciprocal(reciprocalBox.checked);
  });
  createButton.addEventListener('click', () => {
    store.setAutoReciprocal(reciprocalBox.checked);
    void store.createSession({
      mode: modeSelect.value as 'PAIRWISE' | 'COIN',
      n: Number(sizeInput.value),
    });
  });

  const renderBanner = (): void => {
    const state = store.getState();
    const banner = region('banner');
    banner.innerHTML = '';
    if (state.conflict) {
      const box = document.createElement('div');
      box.className = 'conflict-banner';
      box.dataset.banner = 'conflict';
      box.textContent = 'someone else changed this session; reload to continue ';
      const reload = document.createElement('button');
      reload.textContent = 'reload';
      reload.dataset.banner = 'reload';
      reload.addEventListener('click', () => {
        void store.reload();
      });
      box.appendChild(reload);
      banner.appendChild(box);
    } else if (state.errorBanner) {
      const box = document.createElement('div');
      box.className = 'error-banner';
      box.dataset.banner = 'error';
      box.textContent = state.errorBanner;
      banner.appendChild(box);
    }
  };

  const renderAll = (): void => {
    renderBanner();
    renderGrid(region('grid'), store);
    renderCoinPanel(region('coin'), store);
    renderGauge(region('gauge'), store);
    renderHeatmap(region('heatmap'), store);
    panel.render(region('panel'));
  };

  store.subscribe(renderAll);
  renderAll();
  return { store, client, panel };
}

declare global {
  interface Window {
    PRIORANK_SERVICE_URL?: string;
  }
}

if (typeof document !== 'undefined' && document.getElementById('studio-root')) {
  const base = window.PRIORANK_SERVICE_URL ?? '';
  mountStudio(document.getElementById('studio-root') as HTMLElement, new ServiceClient(base));
}
