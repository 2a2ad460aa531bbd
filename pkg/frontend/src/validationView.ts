/**
 * Composite validation table: rows sorted by composite score (best first),
 * k* highlighted. Values are rendered verbatim from the payload.
 */

import type { RunPayload } from './types';

const COLUMNS: [string, (r: RunPayload['validation']['rows'][number]) => string][] = [
  ['k', (r) => String(r.k)],
  ['Silhouette (↑)', (r) => String(r.silhouette)],
  ['Calinski–Harabasz (↑)', (r) => String(r.calinski_harabasz)],
  ['Davies–Bouldin (↓)', (r) => String(r.davies_bouldin)],
  ['Dunn (↑)', (r) => String(r.dunn)],
  ['Composite Score (↑)', (r) => String(r.composite)],
];

export function renderValidationTable(
  container: HTMLElement,
  payload: RunPayload,
  topN = 5,
): void {
  container.textContent = '';
  container.classList.add('validation-view');
  container.dataset.runId = payload.run_id;

  const caption = document.createElement('div');
  caption.className = 'panel-title';
  caption.textContent =
    `Composite validation (k* = ${payload.validation.k_star}, ` +
    `chosen k = ${payload.chosen_k} via ${payload.k_source})`;
  container.appendChild(caption);

  const table = document.createElement('table');
  table.className = 'validation-table';
  const head = document.createElement('tr');
  for (const [label] of COLUMNS) {
    const th = document.createElement('th');
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);

  const rows = [...payload.validation.rows].sort(
    (a, b) => b.composite - a.composite || a.k - b.k,
  );
  for (const row of rows.slice(0, topN)) {
    const tr = document.createElement('tr');
    tr.dataset.k = String(row.k);
    if (row.k === payload.validation.k_star) {
      tr.classList.add('k-star');
    }
    for (const [, render] of COLUMNS) {
      const td = document.createElement('td');
      td.textContent = render(row);
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  container.appendChild(table);

  if (payload.validation.flagged.length > 0) {
    const note = document.createElement('div');
    note.className = 'flagged-note';
    note.textContent =
      'degenerate k excluded: ' +
      payload.validation.flagged.map((f) => `${f.k} (${f.reason})`).join('; ');
    container.appendChild(note);
  }
}
