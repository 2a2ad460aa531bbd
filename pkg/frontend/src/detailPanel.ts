/**
 * Cluster drill-down: headline statistics rendered verbatim from the
 * payload, per-feature attribution boxplots drawn from the server's
 * statistics (no client-side recomputation), and the member list with
 * plain-text id export. All clusters share one vertical scale so boxplots
 * are comparable across panels.
 */

import { clusterColor, linearScale, svgElement } from './scales';
import type { BoxStats, FeatureSummary, RunPayload } from './types';

const BOX_WIDTH = 26;
const SLOT_WIDTH = 44;
const PLOT_HEIGHT = 180;
const PLOT_TOP = 12;
const PLOT_BOTTOM = 28;

/** Global value extent over every cluster's whiskers and outliers, so the
 * vertical scale is identical no matter which cluster is displayed. */
export function sharedValueExtent(features: FeatureSummary[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const feature of features) {
    for (const box of feature.per_cluster) {
      lo = Math.min(lo, box.whisker_low, ...box.outliers);
      hi = Math.max(hi, box.whisker_high, ...box.outliers);
    }
  }
  if (!isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

export function buildExportText(selectedIds: string[]): string {
  return selectedIds.map((id) => `${id}\n`).join('');
}

function statRow(table: HTMLElement, label: string, value: string, field: string): void {
  const row = document.createElement('tr');
  const name = document.createElement('td');
  name.textContent = label;
  const cell = document.createElement('td');
  cell.textContent = value;
  cell.dataset.field = field;
  row.appendChild(name);
  row.appendChild(cell);
  table.appendChild(row);
}

function drawBox(
  group: SVGElement,
  box: BoxStats,
  xCenter: number,
  y: (v: number) => number,
  color: string,
): void {
  const left = xCenter - BOX_WIDTH / 2;
  group.appendChild(svgElement('line', {
    x1: xCenter, y1: y(box.whisker_low), x2: xCenter, y2: y(box.q1),
    stroke: '#555',
  }));
  group.appendChild(svgElement('line', {
    x1: xCenter, y1: y(box.q3), x2: xCenter, y2: y(box.whisker_high),
    stroke: '#555',
  }));
  const bodyTop = y(box.q3);
  const bodyHeight = Math.max(1, y(box.q1) - y(box.q3));
  group.appendChild(svgElement('rect', {
    x: left, y: bodyTop, width: BOX_WIDTH, height: bodyHeight,
    fill: color, 'fill-opacity': 0.55, stroke: '#333',
    class: 'box-body',
  }));
  const median = svgElement('line', {
    x1: left, y1: y(box.median), x2: left + BOX_WIDTH, y2: y(box.median),
    stroke: '#111', 'stroke-width': 2,
    class: 'box-median',
    'data-median': String(box.median),
  });
  group.appendChild(median);
  for (const value of box.outliers) {
    group.appendChild(svgElement('circle', {
      cx: xCenter, cy: y(value), r: 2.5, fill: '#333',
      class: 'box-outlier', 'data-value': String(value),
    }));
  }
}

export interface DetailPanelOptions {
  onExport?: (text: string) => void;
  /** Model to feature at the top of the panel (opened from the map). */
  highlightModelId?: string;
}

export function renderClusterDetail(
  container: HTMLElement,
  payload: RunPayload,
  clusterId: number,
  options: DetailPanelOptions = {},
): void {
  const profile = payload.clusters.find((c) => c.cluster_id === clusterId);
  if (!profile) {
    container.textContent = '';
    const banner = document.createElement('div');
    banner.className = 'error-banner';
    banner.textContent = `unknown cluster ${clusterId}`;
    container.appendChild(banner);
    return;
  }

  container.textContent = '';
  container.classList.add('cluster-detail');
  container.dataset.runId = payload.run_id;
  container.dataset.clusterId = String(clusterId);

  const heading = document.createElement('h3');
  heading.textContent = `Cluster ${clusterId}`;
  heading.style.color = clusterColor(clusterId);
  container.appendChild(heading);

  if (options.highlightModelId) {
    const model = payload.portfolio.models.find(
      (m) => m.id === options.highlightModelId,
    );
    if (model) {
      const focus = document.createElement('div');
      focus.className = 'model-focus';
      focus.dataset.modelId = model.id;
      focus.textContent =
        `selected model ${model.id} — ` +
        `trade-off: ${model.trade_off_param === null ? 'n/a' : String(model.trade_off_param)}, ` +
        `${payload.portfolio.performance_metric}: ${String(model.performance)}, ` +
        `${payload.portfolio.fairness_metric}: ${String(model.fairness)}`;
      container.appendChild(focus);
    }
  }

  // headline statistics, verbatim payload values
  const table = document.createElement('table');
  table.className = 'cluster-stats';
  statRow(table, 'models', String(profile.n_points), 'n_points');
  statRow(table, 'total variance', String(profile.total_variance), 'total_variance');
  statRow(table, `${payload.portfolio.performance_metric} mean`,
    String(profile.performance_mean), 'performance_mean');
  statRow(table, `${payload.portfolio.performance_metric} SD`,
    String(profile.performance_sd), 'performance_sd');
  statRow(table, `${payload.portfolio.fairness_metric} mean`,
    String(profile.fairness_mean), 'fairness_mean');
  statRow(table, `${payload.portfolio.fairness_metric} SD`,
    String(profile.fairness_sd), 'fairness_sd');
  container.appendChild(table);

  // attribution boxplots from server statistics, shared vertical scale
  const features = payload.features;
  const [lo, hi] = sharedValueExtent(features);
  const width = features.length * SLOT_WIDTH + 50;
  const height = PLOT_HEIGHT + PLOT_TOP + PLOT_BOTTOM;
  const y = linearScale([lo, hi], [PLOT_TOP + PLOT_HEIGHT, PLOT_TOP]);
  const svg = svgElement('svg', {
    width, height, viewBox: `0 0 ${width} ${height}`, class: 'boxplots',
    'data-scale-lo': String(lo), 'data-scale-hi': String(hi),
  });
  const plot = svgElement('g', { transform: 'translate(40,0)' });
  features.forEach((feature, index) => {
    const box = feature.per_cluster.find((b) => b.cluster_id === clusterId);
    if (!box) return;
    const xCenter = index * SLOT_WIDTH + SLOT_WIDTH / 2;
    const group = svgElement('g', {
      class: 'feature-box',
      'data-feature': feature.feature_name,
    });
    drawBox(group, box, xCenter, y, clusterColor(clusterId));
    const label = svgElement('text', {
      x: xCenter,
      y: PLOT_TOP + PLOT_HEIGHT + 16,
      'text-anchor': 'end',
      class: 'feature-label',
      transform: `rotate(-35 ${xCenter} ${PLOT_TOP + PLOT_HEIGHT + 16})`,
    });
    label.textContent = feature.feature_name;
    group.appendChild(label);
    plot.appendChild(group);
  });
  svg.appendChild(plot);
  container.appendChild(svg);

  // member list with export of the checked ids
  const list = document.createElement('ul');
  list.className = 'member-list';
  const checkboxes: HTMLInputElement[] = [];
  for (const memberId of profile.member_ids) {
    const item = document.createElement('li');
    const checkbox = document.createElement('input');
    checkbox.type = 'checkbox';
    checkbox.value = memberId;
    checkbox.checked = true;
    checkboxes.push(checkbox);
    item.appendChild(checkbox);
    item.appendChild(document.createTextNode(` ${memberId}`));
    list.appendChild(item);
  }
  container.appendChild(list);

  const exportButton = document.createElement('button');
  exportButton.className = 'export-button';
  exportButton.textContent = 'Export selected model ids';
  exportButton.addEventListener('click', () => {
    const selected = checkboxes.filter((c) => c.checked).map((c) => c.value);
    const text = buildExportText(selected);
    if (options.onExport) {
      options.onExport(text);
    } else {
      downloadText(text, `cluster-${clusterId}-models.txt`);
    }
  });
  container.appendChild(exportButton);
}

function downloadText(text: string, filename: string): void {
  const blob = new Blob([text], { type: 'text/plain' });
  const url = URL.createObjectURL(blob);
  const link = document.createElement('a');
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}
