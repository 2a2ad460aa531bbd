import { beforeEach, describe, expect, it } from 'vitest';

import { WhatIfControls } from '../src/controls';
import type { RunRequest } from '../src/types';
import { container, runPayload } from './helpers';

function setSlider(root: HTMLElement, id: string, value: string): void {
  const input = root.querySelector<HTMLInputElement>(`#${id}`)!;
  input.value = value;
  input.dispatchEvent(new Event('input', { bubbles: true }));
}

describe('WhatIfControls', () => {
  beforeEach(() => {
    document.body.innerHTML = '';
  });

  it('blocks submission when sim >= dissim, with an inline explanation', () => {
    const el = container();
    const submitted: RunRequest[] = [];
    new WhatIfControls(el, (req) => submitted.push(req));
    setSlider(el, 'sim-threshold', '0.30');
    setSlider(el, 'dissim-threshold', '0.20');
    const button = el.querySelector<HTMLButtonElement>('#run-button')!;
    expect(button.disabled).toBe(true);
    expect(el.querySelector('.inline-message')!.textContent).toMatch(/below/);
    button.click();
    expect(submitted.length).toBe(0);
  });

  it('re-enables Run once the invariant holds again', () => {
    const el = container();
    const submitted: RunRequest[] = [];
    new WhatIfControls(el, (req) => submitted.push(req));
    setSlider(el, 'sim-threshold', '0.30');
    setSlider(el, 'dissim-threshold', '0.20');
    setSlider(el, 'sim-threshold', '0.05');
    const button = el.querySelector<HTMLButtonElement>('#run-button')!;
    expect(button.disabled).toBe(false);
    expect(el.querySelector('.inline-message')!.textContent).toBe('');
    button.click();
    expect(submitted.length).toBe(1);
    expect(submitted[0].sim_threshold).toBeCloseTo(0.05);
    expect(submitted[0].dissim_threshold).toBeCloseTo(0.2);
  });

  it('populates the k-override selector from the validation table', () => {
    const el = container();
    const controls = new WhatIfControls(el, () => {});
    const payload = runPayload();
    controls.setValidation(payload);
    const options = [...el.querySelectorAll<HTMLOptionElement>('#k-override option')];
    expect(options[0].value).toBe('');
    expect(options[0].textContent).toContain(`k* = ${payload.validation.k_star}`);
    const ks = options.slice(1).map((o) => Number(o.value));
    expect(ks).toEqual(payload.validation.rows.map((r) => r.k));
  });

  it('carries k override, baseline, and seed into the request', () => {
    const el = container();
    const submitted: RunRequest[] = [];
    const controls = new WhatIfControls(el, (req) => submitted.push(req));
    controls.setValidation(runPayload());
    el.querySelector<HTMLSelectElement>('#k-override')!.value = '4';
    el.querySelector<HTMLInputElement>('#baseline-toggle')!.checked = true;
    el.querySelector<HTMLInputElement>('#seed')!.value = '7';
    el.querySelector<HTMLButtonElement>('#run-button')!.click();
    expect(submitted[0].k_override).toBe(4);
    expect(submitted[0].baseline_mode).toBe(true);
    expect(submitted[0].seed).toBe(7);
  });
});
