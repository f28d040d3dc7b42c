import type { AnalysisResult, ExtractorDescriptor } from "../src/types.js";

/** The service's payload for "Juan vive en Cali." with the rule extractor. */
export function fixtureResult(): AnalysisResult {
  return {
    document: {
      id: "824134699e16",
      text: "Juan vive en Cali.",
      language: "es",
      source: "manual input",
      sentences: [
        {
          index: 0,
          span: { start: 0, end: 18 },
          tokens: [
            { index: 0, span: { start: 0, end: 4 }, surface: "Juan" },
            { index: 1, span: { start: 5, end: 9 }, surface: "vive" },
            { index: 2, span: { start: 10, end: 12 }, surface: "en" },
            { index: 3, span: { start: 13, end: 17 }, surface: "Cali" },
            { index: 4, span: { start: 17, end: 18 }, surface: "." },
          ],
        },
      ],
    },
    mentions: [
      {
        sentence_index: 0,
        token_range: [0, 0],
        span: { start: 0, end: 4 },
        entity_type: "PER",
        extractor_id: "rule-gazetteer",
        confidence: 1.0,
      },
      {
        sentence_index: 0,
        token_range: [3, 3],
        span: { start: 13, end: 17 },
        entity_type: "GPE",
        extractor_id: "rule-gazetteer",
        confidence: 1.0,
      },
    ],
    relations: [
      {
        sentence_index: 0,
        arg1: 0,
        arg2: 1,
        label: "GPE-AFF",
        scores: [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
      },
    ],
    extractor_id: "rule-gazetteer",
    timing: { segment_ms: 0, ner_ms: 0, relex_ms: 0 },
    warnings: [],
  };
}

export function fixtureExtractors(): ExtractorDescriptor[] {
  return [
    {
      id: "learned-tagger",
      display_name: "Learned tagger",
      kind: "learned",
      ready: false,
      detail: "no model loaded",
    },
    {
      id: "remote-adapter",
      display_name: "Remote adapter",
      kind: "remote",
      ready: false,
      detail: "no endpoint configured",
    },
    {
      id: "rule-gazetteer",
      display_name: "Gazetteer rules",
      kind: "rule",
      ready: true,
      detail: "gazetteer.tsv",
    },
  ];
}
