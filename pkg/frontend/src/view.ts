/**
 * Rendering. Every number shown comes straight out of the API response;
 * the view's only own logic is diffing two responses to decide which
 * university cards deserve a moved/new highlight.
 */

import type { RecommendResponse, SlotColumn, UniversityCard } from './types';

export interface SlotDiff {
  moved: Map<string, { from: string; to: string }>;
  appeared: Set<string>;
  removed: Set<string>;
}

export function placements(response: RecommendResponse): Map<string, string> {
  const out = new Map<string, string>();
  for (const slot of response.slots) {
    for (const card of slot.universities) {
      out.set(card.university, slot.label);
    }
  }
  return out;
}

export function diffResponses(
  previous: RecommendResponse | null,
  current: RecommendResponse,
): SlotDiff {
  const diff: SlotDiff = { moved: new Map(), appeared: new Set(), removed: new Set() };
  if (!previous) return diff;
  const before = placements(previous);
  const after = placements(current);
  for (const [university, label] of after) {
    const was = before.get(university);
    if (was === undefined) {
      diff.appeared.add(university);
    } else if (was !== label) {
      diff.moved.set(university, { from: was, to: label });
    }
  }
  for (const university of before.keys()) {
    if (!after.has(university)) diff.removed.add(university);
  }
  return diff;
}

const el = (doc: Document, tag: string, className?: string, text?: string): HTMLElement => {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
};

function renderCard(doc: Document, card: UniversityCard, diff: SlotDiff): HTMLElement {
  const node = el(doc, 'article', 'card');
  node.dataset.university = card.university;
  const move = diff.moved.get(card.university);
  if (move) {
    node.classList.add('card--moved');
    node.dataset.movedFrom = move.from;
  }
  if (diff.appeared.has(card.university)) node.classList.add('card--new');

  node.appendChild(el(doc, 'h3', 'card__name', card.university));
  node.appendChild(
    el(doc, 'p', 'card__range',
       `predicted ${card.predicted_low}–${card.predicted_high}`),
  );
  node.appendChild(
    el(doc, 'p', 'card__interval',
       `your bucket [${card.interval[0]}, ${card.interval[1]})`),
  );
  if (card.location) node.appendChild(el(doc, 'p', 'card__location', card.location));

  const badges = el(doc, 'div', 'card__badges');
  for (const flag of card.flags) {
    badges.appendChild(el(doc, 'span', `badge badge--${flag}`, flag));
  }
  if (move) badges.appendChild(el(doc, 'span', 'badge badge--moved', `was ${move.from}`));
  node.appendChild(badges);
  return node;
}

function renderColumn(doc: Document, slot: SlotColumn, diff: SlotDiff): HTMLElement {
  const column = el(doc, 'section', 'slot-column');
  column.dataset.label = slot.label;
  column.appendChild(el(doc, 'h2', 'slot-column__label', slot.label));
  if (!slot.universities.length) {
    column.appendChild(el(doc, 'p', 'slot-column__empty', 'no universities here'));
  }
  for (const card of slot.universities) {
    column.appendChild(renderCard(doc, card, diff));
  }
  return column;
}

export function renderResults(
  container: HTMLElement,
  response: RecommendResponse,
  previous: RecommendResponse | null,
): SlotDiff {
  const doc = container.ownerDocument;
  const diff = diffResponses(previous, response);
  container.replaceChildren();

  const meta = el(doc, 'p', 'results__meta',
                  `model ${response.model} · table ${response.srt_provenance} · ` +
                  `score ${response.gaokao_score}`);
  if (response.srt_provenance !== 'exact') {
    meta.appendChild(el(doc, 'span', 'badge badge--provenance', response.srt_provenance));
  }
  container.appendChild(meta);

  const columns = el(doc, 'div', 'results__columns');
  for (const slot of response.slots) {
    columns.appendChild(renderColumn(doc, slot, diff));
  }
  container.appendChild(columns);

  if (diff.removed.size) {
    const note = el(doc, 'p', 'results__filtered',
                    `filtered out: ${[...diff.removed].sort().join(', ')}`);
    container.appendChild(note);
  }
  for (const line of response.diagnostics) {
    container.appendChild(el(doc, 'p', 'results__note', line));
  }
  return diff;
}

export function renderIssues(container: HTMLElement, issues: { field: string; message: string }[]): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const issue of issues) {
    const node = el(doc, 'p', 'form-error', issue.message);
    node.dataset.field = issue.field;
    container.appendChild(node);
  }
}

export function renderStatus(container: HTMLElement, text: string, kind: 'loading' | 'error' | 'idle'): void {
  container.textContent = text;
  container.className = `status status--${kind}`;
}
