/** Rendering scales and palettes. Pure pixel mapping, no statistics. */

export interface LinearScale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const fn = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Categorical palette for cluster colors (cycled past 10 clusters). */
const CLUSTER_COLORS = [
  '#4e79a7', '#f28e2b', '#59a14f', '#e15759', '#b07aa1',
  '#76b7b2', '#edc948', '#ff9da7', '#9c755f', '#bab0ac',
];

export function clusterColor(clusterId: number): string {
  return CLUSTER_COLORS[((clusterId % CLUSTER_COLORS.length) + CLUSTER_COLORS.length) % CLUSTER_COLORS.length];
}

/**
 * Diverging color centered at 0 for the distance-change heatmap: deep blue
 * for strong contraction (positive delta), deep red for expansion.
 */
export function divergingColor(value: number, maxAbs: number): string {
  if (maxAbs <= 0) return 'rgb(255,255,255)';
  const t = Math.max(-1, Math.min(1, value / maxAbs));
  const lightness = 255 - Math.round(Math.abs(t) * 195);
  if (t >= 0) {
    return `rgb(${lightness},${lightness},255)`;
  }
  return `rgb(255,${lightness},${lightness})`;
}

export function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS('http://www.w3.org/2000/svg', tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}
