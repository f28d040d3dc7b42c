"""Entity-level scoring: a predicted mention counts only on exact span+type match."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from cner.ner.bio import decode_bio
from cner.ner.perceptron import TaggerModel, _predict_tags
from cner.ner.types import ENTITY_TYPES
from cner.textcore import Sentence


@dataclass(frozen=True)
class TypeScores:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class NerMetrics:
    per_type: dict[str, TypeScores]
    micro: TypeScores
    token_accuracy: float


def evaluate_tagger(
    model: TaggerModel, corpus: Sequence[tuple[Sentence, Sequence[str]]]
) -> NerMetrics:
    """Score the model's predictions against gold BIO tags, per entity type."""

    tp: dict[str, int] = {t: 0 for t in ENTITY_TYPES}
    fp: dict[str, int] = {t: 0 for t in ENTITY_TYPES}
    fn: dict[str, int] = {t: 0 for t in ENTITY_TYPES}
    correct_tokens = total_tokens = 0
    for sentence, gold_tags in corpus:
        predicted_tags, _ = _predict_tags(model, sentence.surfaces())
        correct_tokens += sum(1 for p, g in zip(predicted_tags, gold_tags) if p == g)
        total_tokens += len(gold_tags)
        gold = {m.identity() for m in decode_bio(list(gold_tags), sentence)}
        pred = {m.identity() for m in decode_bio(predicted_tags, sentence)}
        for _, _, entity_type in gold & pred:
            tp[entity_type] += 1
        for _, _, entity_type in pred - gold:
            fp[entity_type] += 1
        for _, _, entity_type in gold - pred:
            fn[entity_type] += 1
    per_type = {t: TypeScores(tp[t], fp[t], fn[t]) for t in ENTITY_TYPES}
    micro = TypeScores(sum(tp.values()), sum(fp.values()), sum(fn.values()))
    return NerMetrics(
        per_type=per_type,
        micro=micro,
        token_accuracy=correct_tokens / total_tokens if total_tokens else 0.0,
    )
