"""Precision/recall/F1 for the relation classifier.

Micro averages pool counts over the five substantive labels only; NON-REL
is the dominant negative class and would otherwise mask performance. When
neither gold nor predictions contain a substantive label the micro ratios
are 0/0; they are reported as 0.0 with micro_undefined set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from cner.relex.model import RelexModel, classify_pair
from cner.relex.types import LABEL_INDEX, NON_REL, RELATION_LABELS


class EmptyCorpusError(ValueError):
    """Evaluation requested on an empty corpus."""


@dataclass(frozen=True)
class LabelScores:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class Metrics:
    per_label: dict[str, LabelScores]
    micro_precision: float
    micro_recall: float
    micro_f1: float
    macro_f1: float
    confusion: tuple[tuple[int, ...], ...]  # rows gold, columns predicted
    micro_undefined: bool


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def score_predictions(pairs: Sequence[tuple[str, str]]) -> Metrics:
    """Metrics from (gold, predicted) label pairs."""

    n = len(RELATION_LABELS)
    confusion = [[0] * n for _ in range(n)]
    for gold, predicted in pairs:
        confusion[LABEL_INDEX[gold]][LABEL_INDEX[predicted]] += 1

    per_label: dict[str, LabelScores] = {}
    for label in RELATION_LABELS:
        k = LABEL_INDEX[label]
        tp = confusion[k][k]
        fp = sum(confusion[g][k] for g in range(n)) - tp
        fn = sum(confusion[k][p] for p in range(n)) - tp
        precision, recall, f1 = _prf(tp, fp, fn)
        per_label[label] = LabelScores(tp, fp, fn, precision, recall, f1)

    substantive = [l for l in RELATION_LABELS if l != NON_REL]
    tp = sum(per_label[l].tp for l in substantive)
    fp = sum(per_label[l].fp for l in substantive)
    fn = sum(per_label[l].fn for l in substantive)
    micro_undefined = tp + fp == 0 and tp + fn == 0
    micro_precision, micro_recall, micro_f1 = _prf(tp, fp, fn)
    macro_f1 = sum(per_label[l].f1 for l in substantive) / len(substantive)
    return Metrics(
        per_label=per_label,
        micro_precision=micro_precision,
        micro_recall=micro_recall,
        micro_f1=micro_f1,
        macro_f1=macro_f1,
        confusion=tuple(tuple(row) for row in confusion),
        micro_undefined=micro_undefined,
    )


def evaluate_relex(
    model: RelexModel, corpus: Sequence[tuple[Iterable[str], str]]
) -> Metrics:
    """Classify every (features, gold label) instance and score the result."""

    if not corpus:
        raise EmptyCorpusError("empty corpus")
    pairs = []
    for features, gold in corpus:
        if gold not in LABEL_INDEX:
            raise ValueError(f"unknown gold label {gold!r}")
        pairs.append((gold, classify_pair(model, features)[1]))
    return score_predictions(pairs)
