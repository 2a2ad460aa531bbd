/**
 * What-if controls: similarity/dissimilarity threshold sliders (client-side
 * invariant sim < dissim, enforced before anything reaches the server),
 * k-override selector fed from the validation table, baseline toggle, and
 * seed field. Submitting posts a new run via the callback.
 */

import type { RunPayload, RunRequest } from './types';

export interface ControlsState {
  simThreshold: number;
  dissimThreshold: number;
  kOverride: number | null;
  baseline: boolean;
  seed: number;
}

const DEFAULTS: ControlsState = {
  simThreshold: 0.05,
  dissimThreshold: 0.2,
  kOverride: null,
  baseline: false,
  seed: 42,
};

export class WhatIfControls {
  private root: HTMLElement;
  private onSubmit: (request: RunRequest) => void;
  private state: ControlsState;

  private simInput!: HTMLInputElement;
  private dissimInput!: HTMLInputElement;
  private kSelect!: HTMLSelectElement;
  private baselineInput!: HTMLInputElement;
  private seedInput!: HTMLInputElement;
  private runButton!: HTMLButtonElement;
  private message!: HTMLElement;

  constructor(
    root: HTMLElement,
    onSubmit: (request: RunRequest) => void,
    initial: Partial<ControlsState> = {},
  ) {
    this.root = root;
    this.onSubmit = onSubmit;
    this.state = { ...DEFAULTS, ...initial };
    this.build();
    this.refresh();
  }

  private slider(label: string, id: string, value: number): HTMLInputElement {
    const wrap = document.createElement('label');
    wrap.className = 'control';
    wrap.htmlFor = id;
    const text = document.createElement('span');
    text.textContent = label;
    wrap.appendChild(text);
    const input = document.createElement('input');
    input.type = 'range';
    input.id = id;
    input.min = '0.01';
    input.max = '1';
    input.step = '0.01';
    input.value = String(value);
    const readout = document.createElement('output');
    readout.textContent = String(value);
    input.addEventListener('input', () => {
      readout.textContent = input.value;
      this.refresh(true);
    });
    wrap.appendChild(input);
    wrap.appendChild(readout);
    this.root.appendChild(wrap);
    return input;
  }

  private build(): void {
    this.root.classList.add('what-if-controls');
    this.simInput = this.slider('similarity threshold', 'sim-threshold', this.state.simThreshold);
    this.dissimInput = this.slider(
      'dissimilarity threshold', 'dissim-threshold', this.state.dissimThreshold,
    );

    const kWrap = document.createElement('label');
    kWrap.className = 'control';
    kWrap.textContent = 'k override ';
    this.kSelect = document.createElement('select');
    this.kSelect.id = 'k-override';
    kWrap.appendChild(this.kSelect);
    this.root.appendChild(kWrap);

    const baselineWrap = document.createElement('label');
    baselineWrap.className = 'control';
    this.baselineInput = document.createElement('input');
    this.baselineInput.type = 'checkbox';
    this.baselineInput.id = 'baseline-toggle';
    this.baselineInput.checked = this.state.baseline;
    baselineWrap.appendChild(this.baselineInput);
    baselineWrap.appendChild(document.createTextNode(' baseline (raw importances)'));
    this.root.appendChild(baselineWrap);

    const seedWrap = document.createElement('label');
    seedWrap.className = 'control';
    seedWrap.textContent = 'seed ';
    this.seedInput = document.createElement('input');
    this.seedInput.type = 'number';
    this.seedInput.id = 'seed';
    this.seedInput.min = '0';
    this.seedInput.value = String(this.state.seed);
    seedWrap.appendChild(this.seedInput);
    this.root.appendChild(seedWrap);

    this.runButton = document.createElement('button');
    this.runButton.id = 'run-button';
    this.runButton.textContent = 'Run';
    this.runButton.addEventListener('click', () => this.submit());
    this.root.appendChild(this.runButton);

    this.message = document.createElement('div');
    this.message.className = 'inline-message';
    this.root.appendChild(this.message);
  }

  /** Fill the k-override options from a run's validation table. */
  setValidation(payload: RunPayload): void {
    const current = this.kSelect.value;
    this.kSelect.textContent = '';
    const auto = document.createElement('option');
    auto.value = '';
    auto.textContent = `auto (k* = ${payload.validation.k_star})`;
    this.kSelect.appendChild(auto);
    for (const row of payload.validation.rows) {
      const option = document.createElement('option');
      option.value = String(row.k);
      option.textContent = `k = ${row.k}`;
      this.kSelect.appendChild(option);
    }
    if ([...this.kSelect.options].some((o) => o.value === current)) {
      this.kSelect.value = current;
    }
  }

  private busy = false;
  private errorText: string | null = null;

  /** Disable Run while a request is in flight (one at a time). */
  setBusy(busy: boolean): void {
    this.busy = busy;
    this.refresh();
  }

  /** Re-validate the client-side invariant; disables Run when violated.
   * Touching a slider clears any stale server error. */
  refresh(clearError = false): void {
    if (clearError) this.errorText = null;
    const sim = Number(this.simInput.value);
    const dissim = Number(this.dissimInput.value);
    if (sim >= dissim) {
      this.runButton.disabled = true;
      this.message.textContent =
        'similarity threshold must stay below the dissimilarity threshold';
    } else {
      this.runButton.disabled = this.busy;
      this.message.textContent = this.errorText ?? '';
    }
  }

  showError(text: string): void {
    this.errorText = text;
    this.refresh();
  }

  currentRequest(): RunRequest {
    const kValue = this.kSelect.value;
    return {
      sim_threshold: Number(this.simInput.value),
      dissim_threshold: Number(this.dissimInput.value),
      k_override: kValue === '' ? null : Number(kValue),
      baseline_mode: this.baselineInput.checked,
      seed: Number(this.seedInput.value),
    };
  }

  private submit(): void {
    if (this.runButton.disabled) return;
    this.onSubmit(this.currentRequest());
  }
}
