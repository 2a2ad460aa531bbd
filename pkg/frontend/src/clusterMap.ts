/**
 * Fairness-performance cluster map: one SVG point per model, colored by
 * cluster assignment, with a legend of exactly the clusters present.
 * Axis orientation follows the reports: fairness horizontal, performance
 * vertical.
 */

import { clusterColor, linearScale, svgElement } from './scales';
import type { RunPayload } from './types';

export interface ClusterMapOptions {
  title?: string;
  width?: number;
  height?: number;
  onModelClick?: (modelId: string) => void;
}

const MARGIN = { top: 28, right: 16, bottom: 40, left: 48 };

export function renderClusterMap(
  container: HTMLElement,
  payload: RunPayload,
  options: ClusterMapOptions = {},
): void {
  const width = options.width ?? 420;
  const height = options.height ?? 340;
  const { portfolio, clustering } = payload;
  const models = portfolio.models;
  const labels = clustering.assignments;

  container.textContent = '';
  container.classList.add('cluster-map');
  container.dataset.runId = payload.run_id;

  if (options.title) {
    const caption = document.createElement('div');
    caption.className = 'panel-title';
    caption.textContent = options.title;
    container.appendChild(caption);
  }

  const svg = svgElement('svg', {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    role: 'img',
  });
  const x = linearScale([0, 1], [MARGIN.left, width - MARGIN.right]);
  const y = linearScale([0, 1], [height - MARGIN.bottom, MARGIN.top]);

  const axes = svgElement('g', { class: 'axes', stroke: '#999' });
  axes.appendChild(svgElement('line', {
    x1: x(0), y1: y(0), x2: x(1), y2: y(0),
  }));
  axes.appendChild(svgElement('line', {
    x1: x(0), y1: y(0), x2: x(0), y2: y(1),
  }));
  svg.appendChild(axes);

  const xLabel = svgElement('text', {
    x: (x(0) + x(1)) / 2,
    y: height - 8,
    'text-anchor': 'middle',
    class: 'axis-label',
  });
  xLabel.textContent = portfolio.fairness_metric;
  svg.appendChild(xLabel);

  const yLabel = svgElement('text', {
    x: 14,
    y: (y(0) + y(1)) / 2,
    'text-anchor': 'middle',
    class: 'axis-label',
    transform: `rotate(-90 14 ${(y(0) + y(1)) / 2})`,
  });
  yLabel.textContent = portfolio.performance_metric;
  svg.appendChild(yLabel);

  const points = svgElement('g', { class: 'points' });
  models.forEach((model, index) => {
    const cluster = labels[index];
    const dot = svgElement('circle', {
      cx: x(model.fairness),
      cy: y(model.performance),
      r: 4,
      fill: clusterColor(cluster),
      class: 'model-point',
      'data-model-id': model.id,
      'data-cluster': cluster,
    });
    const hover = svgElement('title');
    hover.textContent =
      `${model.id}\n` +
      `trade-off: ${model.trade_off_param === null ? 'n/a' : String(model.trade_off_param)}\n` +
      `${portfolio.performance_metric}: ${String(model.performance)}\n` +
      `${portfolio.fairness_metric}: ${String(model.fairness)}`;
    dot.appendChild(hover);
    if (options.onModelClick) {
      dot.addEventListener('click', () => options.onModelClick!(model.id));
    }
    points.appendChild(dot);
  });
  svg.appendChild(points);
  container.appendChild(svg);

  const clusterIds = [...new Set(labels)].sort((a, b) => a - b);
  const legend = document.createElement('ul');
  legend.className = 'legend';
  for (const cid of clusterIds) {
    const item = document.createElement('li');
    item.dataset.cluster = String(cid);
    const swatch = document.createElement('span');
    swatch.className = 'swatch';
    swatch.style.backgroundColor = clusterColor(cid);
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(` cluster ${cid}`));
    legend.appendChild(item);
  }
  container.appendChild(legend);
}
