/**
 * Distance-change heatmap: the server's delta matrix on a diverging scale
 * centered at 0. Deep blue marks strong contraction (positive delta =
 * distance shrank under the learned metric), red marks expansion.
 */

import { divergingColor, svgElement } from './scales';
import type { RunPayload } from './types';

export function renderHeatmap(
  container: HTMLElement,
  payload: RunPayload,
  maxSize = 440,
): void {
  const { ordered_ids: ids, delta, ordering } = payload.heatmap;
  const n = ids.length;
  container.textContent = '';
  container.classList.add('heatmap-view');
  container.dataset.runId = payload.run_id;

  const caption = document.createElement('div');
  caption.className = 'panel-title';
  caption.textContent =
    `Pairwise distance change (models ordered by ${ordering}; ` +
    'blue = contracted, red = expanded)';
  container.appendChild(caption);

  let maxAbs = 0;
  for (const row of delta) {
    for (const value of row) {
      maxAbs = Math.max(maxAbs, Math.abs(value));
    }
  }

  const cell = Math.max(2, Math.floor(maxSize / Math.max(1, n)));
  const size = cell * n;
  const svg = svgElement('svg', {
    width: size, height: size, viewBox: `0 0 ${size} ${size}`,
    class: 'heatmap', 'data-max-abs': String(maxAbs),
  });
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const rect = svgElement('rect', {
        x: j * cell,
        y: i * cell,
        width: cell,
        height: cell,
        fill: divergingColor(delta[i][j], maxAbs),
        class: 'heatmap-cell',
        'data-delta': String(delta[i][j]),
      });
      const hover = svgElement('title');
      hover.textContent = `${ids[i]} vs ${ids[j]}: Δd = ${String(delta[i][j])}`;
      rect.appendChild(hover);
      svg.appendChild(rect);
    }
  }
  container.appendChild(svg);
}
