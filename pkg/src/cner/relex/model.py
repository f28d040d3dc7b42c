"""One-vs-rest linear max-margin relation classifier.

Six binary classifiers share one feature vocabulary; each minimizes the
L2-regularized hinge objective

    (lambda/2)·||w||^2 + (1/n)·sum_i max(0, 1 - y_i·(w·x_i + b))

by stochastic subgradient descent with step size 1/(lambda·t) at update t.
The bias is updated from the hinge term only, never regularized. Instance
order is reshuffled every epoch by a seeded generator, so training is fully
deterministic for a fixed (instances, lambda, epochs, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from cner.modelio import (
    LineReader,
    ModelFormatError,
    created_timestamp,
    fingerprint,
    format_float,
    parse_int,
    read_count,
    read_metadata,
    read_vocab,
)
from cner.ner.types import EntityMention
from cner.relex.features import extract_features, generate_pairs
from cner.relex.types import (
    LABEL_INDEX,
    NON_REL,
    RELATION_LABELS,
    RELATION_LABEL_SET,
    RelationInstance,
)
from cner.textcore import Sentence

RELEX_HEADER = "RELEX v1"
RELEX_FORMAT_VERSION = 1


class EmptyTrainingSetError(ValueError):
    """Training requested on an empty instance list."""


class UnknownLabelError(ValueError):
    """A gold label is outside the closed 6-label set."""


@dataclass
class RelexModel:
    feature_vocabulary: dict[str, int]
    weights: np.ndarray  # (6, |vocabulary|)
    bias: np.ndarray  # (6,)
    hyperparameters: dict[str, float | int]
    metadata: dict[str, int | str] = field(default_factory=dict)
    # Per-epoch averaged objective from training; informational, not serialized.
    epoch_objectives: list[float] = field(default_factory=list)


def vectorize(features: Iterable[str], vocabulary: dict[str, int]) -> tuple[int, ...]:
    """Sorted column indices for the known features; unseen ones are skipped."""

    return tuple(sorted(vocabulary[f] for f in set(features) if f in vocabulary))


def _as_indices(
    features: Iterable[str] | Sequence[int], vocabulary: dict[str, int]
) -> tuple[int, ...]:
    feats = list(features)
    if feats and isinstance(feats[0], int):
        return tuple(feats)  # already vectorized
    return vectorize(feats, vocabulary)  # type: ignore[arg-type]


def instance_objective(
    w: np.ndarray, b: float, x: Sequence[int], y: float, lam: float
) -> float:
    """Regularized hinge objective of one binary classifier on one instance."""

    margin = y * (float(w[list(x)].sum()) + b)
    return 0.5 * lam * float(w @ w) + max(0.0, 1.0 - margin)


def instance_subgradient(
    w: np.ndarray, b: float, x: Sequence[int], y: float, lam: float
) -> tuple[np.ndarray, float]:
    """Analytic subgradient of instance_objective at (w, b).

    At the hinge kink (margin exactly 1) the zero branch is chosen, matching
    the update rule used in training.
    """

    grad_w = lam * w.copy()
    margin = y * (float(w[list(x)].sum()) + b)
    if margin < 1.0:
        grad_w[list(x)] -= y
        return grad_w, -y
    return grad_w, 0.0


def instances_fingerprint(instances: Sequence[tuple[Iterable[str], str]]) -> str:
    return fingerprint(
        " ".join(sorted(set(features))) + "\t" + label for features, label in instances
    )


def train_relex(
    instances: Sequence[tuple[Iterable[str], str]],
    lambda_: float,
    epochs: int,
    seed: int,
) -> RelexModel:
    """Train the six one-vs-rest classifiers; see the module docstring."""

    if not instances:
        raise EmptyTrainingSetError("empty training set")
    if lambda_ <= 0:
        raise ValueError("lambda must be positive")
    if epochs < 1:
        raise ValueError("epochs must be a positive integer")
    frozen = [(sorted(set(features)), label) for features, label in instances]
    for features, label in frozen:
        if label not in RELATION_LABEL_SET:
            raise UnknownLabelError(f"unknown relation label {label!r}")

    vocabulary: dict[str, int] = {}
    for features, _ in frozen:
        for f in features:
            if f not in vocabulary:
                vocabulary[f] = len(vocabulary)
    vectors = [
        (np.array([vocabulary[f] for f in features], dtype=np.intp), LABEL_INDEX[label])
        for features, label in frozen
    ]

    n_labels = len(RELATION_LABELS)
    weights = np.zeros((n_labels, len(vocabulary)))
    bias = np.zeros(n_labels)
    rng = random.Random(seed)
    order = list(range(len(vectors)))
    step = 0
    epoch_objectives: list[float] = []
    for _ in range(epochs):
        rng.shuffle(order)
        objective_sum = 0.0
        for idx in order:
            x, gold = vectors[idx]
            step += 1
            eta = 1.0 / (lambda_ * step)
            y = np.full(n_labels, -1.0)
            y[gold] = 1.0
            margins = y * (weights[:, x].sum(axis=1) + bias)
            objective_sum += 0.5 * lambda_ * float((weights * weights).sum()) + float(
                np.maximum(0.0, 1.0 - margins).sum()
            )
            weights *= 1.0 - eta * lambda_
            violating = margins < 1.0
            for k in np.nonzero(violating)[0]:
                weights[k, x] += eta * y[k]
            bias[violating] += eta * y[violating]
        epoch_objectives.append(objective_sum / len(vectors))

    return RelexModel(
        feature_vocabulary=vocabulary,
        weights=weights,
        bias=bias,
        hyperparameters={"lambda": lambda_, "epochs": epochs, "seed": seed},
        metadata={
            "format": RELEX_FORMAT_VERSION,
            "created": created_timestamp(),
            "corpus": instances_fingerprint(list(instances)),
        },
        epoch_objectives=epoch_objectives,
    )


def classify_pair(
    model: RelexModel, features: Iterable[str] | Sequence[int]
) -> tuple[tuple[float, ...], str]:
    """Scores in canonical label order plus the tie-broken argmax label.

    Exact ties involving NON-REL resolve to NON-REL; other exact ties to the
    lowest canonical index.
    """

    x = list(_as_indices(features, model.feature_vocabulary))
    raw = model.weights[:, x].sum(axis=1) + model.bias
    scores = tuple(float(s) for s in raw)
    best = max(scores)
    candidates = [i for i, s in enumerate(scores) if s == best]
    if LABEL_INDEX[NON_REL] in candidates:
        label = NON_REL
    else:
        label = RELATION_LABELS[candidates[0]]
    return scores, label


def training_accuracy(
    model: RelexModel, instances: Sequence[tuple[Iterable[str], str]]
) -> float:
    correct = sum(
        1 for features, gold in instances if classify_pair(model, features)[1] == gold
    )
    return correct / len(instances) if instances else 0.0


def extract_relations(
    sentence: Sentence,
    mentions: Sequence[EntityMention],
    model: RelexModel,
    max_token_distance: int = 50,
) -> list[RelationInstance]:
    """Classify every candidate pair; NON-REL instances are kept (callers filter)."""

    instances = []
    for pair in generate_pairs(sentence, mentions, max_token_distance):
        features = extract_features(pair, sentence, all_mentions=mentions)
        scores, label = classify_pair(model, features)
        instances.append(RelationInstance(pair=pair, label=label, scores=scores))
    return instances


def save_relex(model: RelexModel, path: str) -> None:
    """Write the versioned single-file format; bit-exact per model."""

    hp = model.hyperparameters
    lines = [
        RELEX_HEADER,
        f"format={model.metadata.get('format', RELEX_FORMAT_VERSION)}",
        f"created={model.metadata.get('created', 0)}",
        f"seed={hp.get('seed', 0)}",
        f"epochs={hp.get('epochs', 0)}",
        f"lambda={format_float(float(hp.get('lambda', 0.0)))}",
        f"corpus={model.metadata.get('corpus', '')}",
        "labels=" + " ".join(RELATION_LABELS),
        f"vocab {len(model.feature_vocabulary)}",
    ]
    lines.extend(model.feature_vocabulary)
    rows, cols = np.nonzero(model.weights)
    lines.append(f"weights {len(rows)}")
    lines.extend(
        f"{int(k)} {int(f)} {format_float(float(model.weights[k, f]))}"
        for k, f in zip(rows, cols)
    )
    lines.append("bias " + " ".join(format_float(float(b)) for b in model.bias))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_relex(path: str) -> RelexModel:
    with open(path, "r", encoding="utf-8") as fh:
        reader = LineReader(iter(fh), source=path)
        header = reader.next("header")
        if header != RELEX_HEADER:
            raise reader.fail(f"expected {RELEX_HEADER!r} header, got {header!r}")
        meta_raw, section = read_metadata(reader, "vocab")
        labels_value = meta_raw.pop("labels", None)
        if labels_value is None or tuple(labels_value.split(" ")) != RELATION_LABELS:
            raise ModelFormatError(f"{path}: label set does not match the canonical labels")
        vocab = read_vocab(reader, read_count(reader, section, "vocab"))
        weights = np.zeros((len(RELATION_LABELS), len(vocab)))
        count = read_count(reader, reader.next("weights section"), "weights")
        for _ in range(count):
            parts = reader.next("weight triple").split(" ")
            if len(parts) != 3:
                raise reader.fail("expected 'label_index feature_index weight'")
            try:
                k, f, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise reader.fail(f"bad weight triple {parts!r}")
            if not 0 <= k < len(RELATION_LABELS) or not 0 <= f < len(vocab):
                raise reader.fail("weight triple index out of range")
            weights[k, f] = w
        bias_parts = reader.next("bias line").split(" ")
        if len(bias_parts) != len(RELATION_LABELS) + 1 or bias_parts[0] != "bias":
            raise reader.fail("expected 'bias' line with six values")
        try:
            bias = np.array([float(v) for v in bias_parts[1:]])
        except ValueError:
            raise reader.fail("bad bias value")
    try:
        lambda_ = float(meta_raw["lambda"])
    except (KeyError, ValueError):
        raise ModelFormatError(f"{path}: missing or invalid lambda")
    return RelexModel(
        feature_vocabulary=vocab,
        weights=weights,
        bias=bias,
        hyperparameters={
            "lambda": lambda_,
            "epochs": parse_int(meta_raw, "epochs", path),
            "seed": parse_int(meta_raw, "seed", path),
        },
        metadata={
            "format": parse_int(meta_raw, "format", path),
            "created": parse_int(meta_raw, "created", path),
            "corpus": meta_raw.get("corpus", ""),
        },
    )
