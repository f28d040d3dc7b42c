"""Relation extraction: pair generation, features, linear classification."""

from cner.relex.types import (
    NON_REL,
    RELATION_LABELS,
    MentionPair,
    RelationInstance,
)
from cner.relex.features import extract_features, generate_pairs
from cner.relex.model import (
    EmptyTrainingSetError,
    RelexModel,
    UnknownLabelError,
    classify_pair,
    extract_relations,
    instance_objective,
    instance_subgradient,
    load_relex,
    save_relex,
    train_relex,
)
from cner.relex.metrics import EmptyCorpusError, LabelScores, Metrics, evaluate_relex

__all__ = [
    "RELATION_LABELS",
    "NON_REL",
    "MentionPair",
    "RelationInstance",
    "generate_pairs",
    "extract_features",
    "RelexModel",
    "EmptyTrainingSetError",
    "UnknownLabelError",
    "train_relex",
    "classify_pair",
    "extract_relations",
    "instance_objective",
    "instance_subgradient",
    "save_relex",
    "load_relex",
    "Metrics",
    "LabelScores",
    "EmptyCorpusError",
    "evaluate_relex",
]
