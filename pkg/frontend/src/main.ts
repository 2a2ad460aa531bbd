/** Entry point: wire the app to the DOM skeleton in index.html. */

import { ApiClient } from './api';
import { AppElements, ExplorerApp } from './app';

const API_BASE = (window as unknown as { FAIRSCOPE_API?: string }).FAIRSCOPE_API
  ?? 'http://localhost:8000';

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function bootstrap(): void {
  const elements: AppElements = {
    controls: el('controls'),
    map: el('cluster-map'),
    baselineMap: el('baseline-map'),
    validation: el('validation'),
    detail: el('cluster-detail'),
    heatmap: el('heatmap'),
    status: el('status'),
  };
  const api = new ApiClient(API_BASE);
  const app = new ExplorerApp(api, elements);

  const baselineToggle = document.getElementById('side-by-side') as HTMLInputElement | null;
  baselineToggle?.addEventListener('change', () => {
    void app.toggleBaselinePanel(baselineToggle.checked);
  });

  void app.submitRun({
    sim_threshold: 0.05,
    dissim_threshold: 0.2,
    seed: 42,
  });
}

document.addEventListener('DOMContentLoaded', bootstrap);
