import { beforeEach, describe, expect, it } from 'vitest';

import { divergingColor } from '../src/scales';
import { renderHeatmap } from '../src/heatmapView';
import { container, runPayload } from './helpers';

describe('renderHeatmap', () => {
  beforeEach(() => {
    document.body.innerHTML = '';
  });

  it('renders an n-by-n grid with verbatim delta values', () => {
    const payload = runPayload();
    const n = payload.heatmap.ordered_ids.length;
    const el = container();
    renderHeatmap(el, payload);
    const cells = el.querySelectorAll('rect.heatmap-cell');
    expect(cells.length).toBe(n * n);
    expect(cells[1].getAttribute('data-delta')).toBe(
      String(payload.heatmap.delta[0][1]),
    );
  });

  it('uses a diverging scale centered at zero', () => {
    expect(divergingColor(0, 1)).toBe('rgb(255,255,255)');
    const strongContraction = divergingColor(1, 1);   // deep blue
    const strongExpansion = divergingColor(-1, 1);    // deep red
    expect(strongContraction).toBe('rgb(60,60,255)');
    expect(strongExpansion).toBe('rgb(255,60,60)');
    // contraction is bluer than expansion for the same magnitude
    expect(strongContraction.endsWith('255)')).toBe(true);
    expect(strongExpansion.startsWith('rgb(255')).toBe(true);
  });

  it('mentions the model ordering key in the caption', () => {
    const payload = runPayload();
    const el = container();
    renderHeatmap(el, payload);
    expect(el.querySelector('.panel-title')!.textContent).toContain(
      payload.heatmap.ordering,
    );
  });
});
