/** DOM builders for the result views.
 *
 * All linguistic content comes from the payload: highlighted substrings are
 * produced by slicing the echoed document text with the returned offsets.
 * This module performs no tokenization or classification of its own.
 */

import { entityColor, ENTITY_COLORS } from "./palette.js";
import type {
  AnalysisResult,
  ExtractorDescriptor,
  MentionPayload,
  SentencePayload,
} from "./types.js";
import { relationScore } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderExtractorSelector(
  descriptors: ExtractorDescriptor[],
  selectedId: string | null,
  onSelect: (id: string) => void,
): HTMLElement {
  const container = el("fieldset", "extractor-selector");
  container.appendChild(el("legend", undefined, "Named-entity extractor"));
  for (const descriptor of descriptors) {
    const label = el("label", "extractor-option");
    const input = el("input");
    input.type = "radio";
    input.name = "extractor";
    input.value = descriptor.id;
    input.checked = descriptor.id === selectedId;
    input.disabled = !descriptor.ready;
    input.addEventListener("change", () => onSelect(descriptor.id));
    label.appendChild(input);
    label.appendChild(
      el("span", "extractor-name", descriptor.display_name),
    );
    if (!descriptor.ready) {
      label.classList.add("not-ready");
      label.title = descriptor.detail;
      label.appendChild(el("span", "extractor-detail", ` — ${descriptor.detail}`));
    }
    container.appendChild(label);
  }
  return container;
}

export function renderLegend(): HTMLElement {
  const legend = el("div", "entity-legend");
  for (const [entityType, color] of Object.entries(ENTITY_COLORS)) {
    const item = el("span", "legend-item");
    const swatch = el("span", "legend-swatch");
    swatch.style.backgroundColor = color;
    item.appendChild(swatch);
    item.appendChild(el("span", undefined, entityType));
    legend.appendChild(item);
  }
  return legend;
}

function renderSentenceBody(
  text: string,
  sentence: SentencePayload,
  mentions: MentionPayload[],
): HTMLElement {
  const body = el("p", "sentence-text");
  const own = mentions
    .filter((m) => m.sentence_index === sentence.index)
    .sort((a, b) => a.span.start - b.span.start);
  let cursor = sentence.span.start;
  for (const mention of own) {
    if (mention.span.start > cursor) {
      body.appendChild(document.createTextNode(text.slice(cursor, mention.span.start)));
    }
    const mark = el("mark", "mention", text.slice(mention.span.start, mention.span.end));
    mark.dataset.entityType = mention.entity_type;
    mark.style.backgroundColor = entityColor(mention.entity_type);
    mark.title = `${mention.entity_type} · ${mention.confidence.toFixed(2)} · ${mention.extractor_id}`;
    body.appendChild(mark);
    cursor = mention.span.end;
  }
  if (cursor < sentence.span.end) {
    body.appendChild(document.createTextNode(text.slice(cursor, sentence.span.end)));
  }
  return body;
}

export function renderSentencePanels(result: AnalysisResult): HTMLElement {
  const container = el("section", "sentence-panels");
  for (const sentence of result.document.sentences) {
    const panel = el("article", "sentence-panel");
    panel.appendChild(el("h3", undefined, `Sentence ${sentence.index + 1}`));
    panel.appendChild(
      renderSentenceBody(result.document.text, sentence, result.mentions),
    );
    container.appendChild(panel);
  }
  if (result.document.sentences.length === 0) {
    container.appendChild(el("p", "empty-note", "No sentences found."));
  }
  return container;
}

export function renderRelationTable(result: AnalysisResult): HTMLElement {
  const table = el("table", "relation-table");
  const head = el("thead");
  const headRow = el("tr");
  for (const column of ["Sentence", "Argument 1", "Type", "Argument 2", "Type", "Label", "Score"]) {
    headRow.appendChild(el("th", undefined, column));
  }
  head.appendChild(headRow);
  table.appendChild(head);

  const body = el("tbody");
  const text = result.document.text;
  const sorted = [...result.relations].sort((a, b) => {
    if (a.sentence_index !== b.sentence_index) {
      return a.sentence_index - b.sentence_index;
    }
    return relationScore(b) - relationScore(a);
  });
  for (const relation of sorted) {
    const arg1 = result.mentions[relation.arg1];
    const arg2 = result.mentions[relation.arg2];
    const row = el("tr", "relation-row");
    row.dataset.label = relation.label;
    row.appendChild(el("td", undefined, String(relation.sentence_index + 1)));
    row.appendChild(el("td", "arg-surface", text.slice(arg1.span.start, arg1.span.end)));
    row.appendChild(el("td", undefined, arg1.entity_type));
    row.appendChild(el("td", "arg-surface", text.slice(arg2.span.start, arg2.span.end)));
    row.appendChild(el("td", undefined, arg2.entity_type));
    row.appendChild(el("td", "relation-label", relation.label));
    row.appendChild(el("td", undefined, relationScore(relation).toFixed(3)));
    body.appendChild(row);
  }
  table.appendChild(body);
  if (sorted.length === 0) {
    const empty = el("caption", "empty-note", "No relations found.");
    table.appendChild(empty);
  }
  return table;
}

export function renderWarnings(warnings: string[]): HTMLElement {
  const list = el("ul", "warnings");
  for (const warning of warnings) {
    list.appendChild(el("li", undefined, warning));
  }
  return list;
}
