/** Wire types mirroring the analysis service's JSON payloads. */

export interface Span {
  start: number;
  end: number;
}

export interface TokenPayload {
  index: number;
  span: Span;
  surface: string;
}

export interface SentencePayload {
  index: number;
  span: Span;
  tokens: TokenPayload[];
}

export interface DocumentPayload {
  id: string;
  text: string;
  language: string;
  source: string;
  sentences: SentencePayload[];
}

export interface MentionPayload {
  sentence_index: number;
  token_range: [number, number];
  span: Span;
  entity_type: string;
  extractor_id: string;
  confidence: number;
}

export interface RelationPayload {
  sentence_index: number;
  arg1: number;
  arg2: number;
  label: string;
  scores: number[];
}

export interface AnalysisResult {
  document: DocumentPayload;
  mentions: MentionPayload[];
  relations: RelationPayload[];
  extractor_id: string;
  timing: { segment_ms: number; ner_ms: number; relex_ms: number };
  warnings: string[];
}

export interface ExtractorDescriptor {
  id: string;
  display_name: string;
  kind: string;
  ready: boolean;
  detail: string;
}

/** Canonical relation label order; scores arrive in this order. */
export const RELATION_LABELS = [
  "GPE-AFF",
  "PHYS",
  "DISC",
  "EMP-ORG",
  "ART",
  "NON-REL",
] as const;

export function relationScore(relation: RelationPayload): number {
  const index = RELATION_LABELS.indexOf(
    relation.label as (typeof RELATION_LABELS)[number],
  );
  return index >= 0 ? relation.scores[index] : Math.max(...relation.scores);
}
