from __future__ import annotations

import random
from collections import Counter

import numpy as np
import pytest

from cner.relex.metrics import EmptyCorpusError, evaluate_relex, score_predictions
from cner.relex.model import RelexModel, train_relex
from cner.relex.types import NON_REL, RELATION_LABELS

from helpers import separable_relex_instances


def hand_fixture_model() -> RelexModel:
    """Predicts PHYS whenever feature 'a' is active, NON-REL otherwise."""

    weights = np.zeros((6, 2))
    weights[1, 0] = 1.0  # PHYS fires on 'a'
    return RelexModel(
        feature_vocabulary={"a": 0, "b": 1},
        weights=weights,
        bias=np.zeros(6),
        hyperparameters={},
    )


class TestHandCountedFixture:
    # Gold: two PHYS and one NON-REL. Predictions: PHYS, NON-REL, PHYS,
    # giving PHYS TP=1, FN=1, FP=1.
    CORPUS = [({"a"}, "PHYS"), ({"b"}, "PHYS"), ({"a"}, NON_REL)]

    def test_phys_scores_exact(self):
        metrics = evaluate_relex(hand_fixture_model(), self.CORPUS)
        phys = metrics.per_label["PHYS"]
        assert (phys.tp, phys.fp, phys.fn) == (1, 1, 1)
        assert phys.precision == 0.5
        assert phys.recall == 0.5
        assert phys.f1 == 0.5

    def test_micro_over_substantive_labels(self):
        metrics = evaluate_relex(hand_fixture_model(), self.CORPUS)
        assert metrics.micro_precision == 0.5
        assert metrics.micro_recall == 0.5
        assert metrics.micro_f1 == 0.5
        assert metrics.micro_undefined is False

    def test_confusion_row_sums_match_gold_counts(self):
        metrics = evaluate_relex(hand_fixture_model(), self.CORPUS)
        gold_counts = Counter(gold for _, gold in self.CORPUS)
        for label, row in zip(RELATION_LABELS, metrics.confusion):
            assert sum(row) == gold_counts.get(label, 0)


class TestEdgeCases:
    def test_perfect_predictions(self):
        instances = separable_relex_instances(random.Random(3), per_class=4)
        model = train_relex(instances, 0.01, 60, seed=2)
        metrics = evaluate_relex(model, instances)
        for label in RELATION_LABELS:
            s = metrics.per_label[label]
            assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)
        assert metrics.micro_f1 == 1.0
        assert metrics.macro_f1 == 1.0

    def test_all_non_rel_sets_undefined_flag(self):
        model = RelexModel(
            feature_vocabulary={"a": 0},
            weights=np.zeros((6, 1)),
            bias=np.zeros(6),
            hyperparameters={},
        )
        metrics = evaluate_relex(model, [({"a"}, NON_REL), ({"a"}, NON_REL)])
        assert metrics.micro_f1 == 0.0
        assert metrics.micro_undefined is True
        assert metrics.per_label[NON_REL].f1 == 1.0

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            evaluate_relex(hand_fixture_model(), [])

    def test_scores_bounded_and_rows_recount(self):
        rng = random.Random(17)
        pairs = [
            (rng.choice(RELATION_LABELS), rng.choice(RELATION_LABELS))
            for _ in range(300)
        ]
        metrics = score_predictions(pairs)
        for value in (metrics.micro_precision, metrics.micro_recall, metrics.micro_f1):
            assert 0.0 <= value <= 1.0
        gold_counts = Counter(g for g, _ in pairs)
        for label, row in zip(RELATION_LABELS, metrics.confusion):
            assert sum(row) == gold_counts.get(label, 0)
