/**
 * Explorer application: one immutable run payload snapshot drives every
 * panel. A what-if submission posts a run, fetches the full payload, and
 * swaps all panels in one pass; responses for superseded requests are
 * discarded, so the panels can never mix run ids. The baseline toggle
 * fetches a second run (baseline_mode, k pinned to the main run's chosen k)
 * and renders it beside the transformed map.
 */

import { ApiError } from './api';
import { renderClusterMap } from './clusterMap';
import { WhatIfControls } from './controls';
import { renderClusterDetail } from './detailPanel';
import { renderHeatmap } from './heatmapView';
import type { RunCreated, RunPayload, RunRequest } from './types';
import { renderValidationTable } from './validationView';

/** The slice of the API client the app depends on (stubbable in tests). */
export interface RunApi {
  startRun(request: RunRequest): Promise<RunCreated>;
  getRun(runId: string): Promise<RunPayload>;
}

export interface AppElements {
  controls: HTMLElement;
  map: HTMLElement;
  baselineMap: HTMLElement;
  validation: HTMLElement;
  detail: HTMLElement;
  heatmap: HTMLElement;
  status: HTMLElement;
}

export class ExplorerApp {
  readonly controls: WhatIfControls;
  private api: RunApi;
  private el: AppElements;
  private requestCounter = 0;
  private current: RunPayload | null = null;
  private baseline: RunPayload | null = null;
  private selectedCluster: number | null = null;

  constructor(api: RunApi, elements: AppElements) {
    this.api = api;
    this.el = elements;
    this.controls = new WhatIfControls(elements.controls, (req) => {
      void this.submitRun(req);
    });
  }

  get currentRun(): RunPayload | null {
    return this.current;
  }

  /** POST a run and swap the UI to its payload, dropping stale responses. */
  async submitRun(request: RunRequest): Promise<void> {
    const ticket = ++this.requestCounter;
    this.el.status.textContent = 'running…';
    this.controls.setBusy(true);
    try {
      const created = await this.api.startRun(request);
      const payload = await this.api.getRun(created.run_id);
      let baseline: RunPayload | null = null;
      if (request.baseline_mode !== true && this.showBaseline) {
        baseline = await this.fetchBaseline(request, payload);
      }
      if (ticket !== this.requestCounter) return; // superseded: discard
      this.current = payload;
      this.baseline = baseline;
      this.renderAll();
      this.el.status.textContent = `run ${payload.run_id} complete`;
    } catch (err) {
      if (ticket !== this.requestCounter) return;
      if (err instanceof ApiError) {
        const where = err.stage ? ` (stage: ${err.stage})` : '';
        this.controls.showError(`${err.message}${where}`);
        this.el.status.textContent = 'run failed';
      } else {
        this.el.status.textContent = 'run failed: network error';
      }
    } finally {
      if (ticket === this.requestCounter) this.controls.setBusy(false);
    }
  }

  private showBaseline = false;

  async toggleBaselinePanel(show: boolean): Promise<void> {
    this.showBaseline = show;
    if (!show) {
      this.baseline = null;
      this.renderAll();
      return;
    }
    if (this.current) {
      const config = this.current.config as Record<string, unknown>;
      const constraint = (config.constraint ?? {}) as Record<string, number>;
      const request: RunRequest = {
        sim_threshold: constraint.sim_threshold ?? 0.05,
        dissim_threshold: constraint.dissim_threshold ?? 0.2,
        seed: Number(config.seed ?? 42),
      };
      this.baseline = await this.fetchBaseline(request, this.current);
      this.renderAll();
    }
  }

  /** Baseline companion run: raw importances, same k as the main run. */
  private async fetchBaseline(
    request: RunRequest, main: RunPayload,
  ): Promise<RunPayload | null> {
    try {
      const created = await this.api.startRun({
        ...request,
        baseline_mode: true,
        k_override: main.chosen_k,
      });
      return await this.api.getRun(created.run_id);
    } catch {
      return null; // baseline view is optional; the main run still renders
    }
  }

  selectCluster(clusterId: number, modelId?: string): void {
    this.selectedCluster = clusterId;
    if (this.current) {
      renderClusterDetail(this.el.detail, this.current, clusterId, {
        highlightModelId: modelId,
      });
    }
  }

  /** Swap every panel to the current snapshot in one synchronous pass. */
  private renderAll(): void {
    const payload = this.current;
    if (!payload) return;
    renderClusterMap(this.el.map, payload, {
      title: 'transformed importances',
      onModelClick: (modelId) => {
        const index = payload.portfolio.models.findIndex((m) => m.id === modelId);
        if (index >= 0) {
          this.selectCluster(payload.clustering.assignments[index], modelId);
        }
      },
    });
    if (this.baseline) {
      renderClusterMap(this.el.baselineMap, this.baseline, {
        title: 'raw importances (baseline)',
      });
      this.el.baselineMap.hidden = false;
    } else {
      this.el.baselineMap.textContent = '';
      this.el.baselineMap.hidden = true;
    }
    renderValidationTable(this.el.validation, payload);
    this.controls.setValidation(payload);
    const cluster =
      this.selectedCluster !== null
      && payload.clusters.some((c) => c.cluster_id === this.selectedCluster)
        ? this.selectedCluster
        : payload.clusters[0].cluster_id;
    this.selectedCluster = cluster;
    renderClusterDetail(this.el.detail, payload, cluster);
    renderHeatmap(this.el.heatmap, payload);
  }
}
