"""Averaged-perceptron sequence tagger over BIO tags.

A per-token linear classifier decoded greedily left to right; the previous
*predicted* tag feeds the feature set, so training and inference see the
same distribution. Final weights are the running average over all update
steps, which both stabilizes the online updates and makes the result
deterministic for a fixed (corpus, epochs, seed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Sequence

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
from cner.ner.bio import BIO_TAGS, BIO_TAG_SET, decode_bio
from cner.ner.types import EntityMention
from cner.textcore import Sentence

TAGGER_HEADER = "NERTAG v1"
TAGGER_FORMAT_VERSION = 1
_START_TAG = "<start>"
_PAD_LEFT = "<s>"
_PAD_RIGHT = "</s>"


class EmptyCorpusError(ValueError):
    """Training requested on an empty corpus."""


class IllFormedGoldError(ValueError):
    """A gold tag sequence is not well-formed BIO or has the wrong length."""


@dataclass
class TaggerModel:
    """Learned weights plus the vocabulary that indexes them.

    weights maps feature column -> {tag index: weight}; tag indices follow
    the canonical BIO_TAGS order. Immutable by convention after training or
    loading.
    """

    feature_vocabulary: dict[str, int]
    weights: dict[int, dict[int, float]]
    tag_set: tuple[str, ...] = BIO_TAGS
    metadata: dict[str, int | str] = field(default_factory=dict)


def _word_shape(word: str) -> str:
    shape = []
    for ch in word:
        if ch.isupper():
            code = "X"
        elif ch.islower():
            code = "x"
        elif ch.isdigit():
            code = "d"
        else:
            code = "o"
        if not shape or shape[-1] != code:
            shape.append(code)
    return "".join(shape)


def _token_features(surfaces: Sequence[str], i: int, prev_tag: str) -> list[str]:
    word = surfaces[i]
    low = word.lower()
    n = len(surfaces)
    feats = [f"w={low}", f"shape={_word_shape(word)}"]
    for k in (1, 2, 3):
        if len(low) >= k:
            feats.append(f"p{k}={low[:k]}")
            feats.append(f"s{k}={low[-k:]}")
    if word[0].isupper():
        feats.append("cap")
    if i == 0:
        feats.append("first")
    feats.append(f"w-1={surfaces[i - 1].lower() if i >= 1 else _PAD_LEFT}")
    feats.append(f"w-2={surfaces[i - 2].lower() if i >= 2 else _PAD_LEFT}")
    feats.append(f"w+1={surfaces[i + 1].lower() if i + 1 < n else _PAD_RIGHT}")
    feats.append(f"w+2={surfaces[i + 2].lower() if i + 2 < n else _PAD_RIGHT}")
    feats.append(f"t-1={prev_tag}")
    feats.append(f"t-1w={prev_tag}~{low}")
    return feats


def _argmax_with_margin(scores: Sequence[float]) -> tuple[int, float]:
    """Best tag index (canonical order breaks exact ties) and its margin."""

    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    second = None
    for i, s in enumerate(scores):
        if i != best and (second is None or s > second):
            second = s
    return best, scores[best] - (second if second is not None else 0.0)


def validate_gold(sentence_len: int, tags: Sequence[str]) -> None:
    if len(tags) != sentence_len:
        raise IllFormedGoldError(
            f"{len(tags)} tags for {sentence_len} tokens"
        )
    prev_type = None
    for i, tag in enumerate(tags):
        if tag not in BIO_TAG_SET:
            raise IllFormedGoldError(f"unknown tag {tag!r} at position {i}")
        if tag.startswith("I-"):
            if prev_type != tag[2:]:
                raise IllFormedGoldError(f"dangling {tag} at position {i}")
            continue
        prev_type = tag[2:] if tag != "O" else None


class _AveragedWeights:
    """Perceptron weights with lazily accumulated running averages."""

    def __init__(self) -> None:
        self.current: dict[str, dict[int, float]] = {}
        self._totals: dict[tuple[str, int], float] = {}
        self._stamps: dict[tuple[str, int], int] = {}
        self.steps = 0

    def score(self, feats: Sequence[str], scores: list[float]) -> None:
        for f in feats:
            col = self.current.get(f)
            if col:
                for tag_idx, w in col.items():
                    scores[tag_idx] += w

    def update(self, feats: Sequence[str], gold_idx: int, pred_idx: int) -> None:
        for f in feats:
            self._bump(f, gold_idx, 1.0)
            self._bump(f, pred_idx, -1.0)

    def _bump(self, feature: str, tag_idx: int, delta: float) -> None:
        col = self.current.setdefault(feature, {})
        key = (feature, tag_idx)
        weight = col.get(tag_idx, 0.0)
        self._totals[key] = self._totals.get(key, 0.0) + (
            self.steps - self._stamps.get(key, 0)
        ) * weight
        self._stamps[key] = self.steps
        col[tag_idx] = weight + delta

    def averaged(self) -> dict[str, dict[int, float]]:
        if self.steps == 0:
            return {}
        out: dict[str, dict[int, float]] = {}
        for feature, col in self.current.items():
            avg_col = {}
            for tag_idx, weight in col.items():
                key = (feature, tag_idx)
                total = self._totals.get(key, 0.0) + (
                    self.steps - self._stamps.get(key, 0)
                ) * weight
                avg = total / self.steps
                if avg != 0.0:
                    avg_col[tag_idx] = avg
            if avg_col:
                out[feature] = avg_col
        return out


def corpus_fingerprint(corpus: Sequence[tuple[Sentence, Sequence[str]]]) -> str:
    return fingerprint(
        " ".join(sentence.surfaces()) + "\t" + " ".join(tags)
        for sentence, tags in corpus
    )


def train_tagger(
    corpus: Sequence[tuple[Sentence, Sequence[str]]],
    epochs: int,
    seed: int,
) -> TaggerModel:
    """Train on (sentence, gold BIO tags) pairs; deterministic per seed."""

    if not corpus:
        raise EmptyCorpusError("empty corpus")
    for sentence, tags in corpus:
        validate_gold(len(sentence.tokens), tags)
    if epochs < 0:
        raise ValueError("epochs must be >= 0")

    trainer = _AveragedWeights()
    rng = random.Random(seed)
    order = list(range(len(corpus)))
    for _ in range(epochs):
        rng.shuffle(order)
        for idx in order:
            sentence, gold = corpus[idx]
            surfaces = sentence.surfaces()
            prev_tag = _START_TAG
            for i in range(len(surfaces)):
                trainer.steps += 1
                feats = _token_features(surfaces, i, prev_tag)
                scores = [0.0] * len(BIO_TAGS)
                trainer.score(feats, scores)
                pred_idx, _ = _argmax_with_margin(scores)
                gold_idx = BIO_TAGS.index(gold[i])
                if pred_idx != gold_idx:
                    trainer.update(feats, gold_idx, pred_idx)
                prev_tag = BIO_TAGS[pred_idx]

    averaged = trainer.averaged()
    vocabulary = {feature: idx for idx, feature in enumerate(averaged)}
    weights = {vocabulary[f]: col for f, col in averaged.items()}
    metadata = {
        "format": TAGGER_FORMAT_VERSION,
        "created": created_timestamp(),
        "seed": seed,
        "epochs": epochs,
        "corpus": corpus_fingerprint(corpus),
    }
    return TaggerModel(feature_vocabulary=vocabulary, weights=weights, metadata=metadata)


def _predict_tags(model: TaggerModel, surfaces: Sequence[str]) -> tuple[list[str], list[float]]:
    tags: list[str] = []
    margins: list[float] = []
    prev_tag = _START_TAG
    for i in range(len(surfaces)):
        scores = [0.0] * len(BIO_TAGS)
        for f in _token_features(surfaces, i, prev_tag):
            idx = model.feature_vocabulary.get(f)
            if idx is None:
                continue
            col = model.weights.get(idx)
            if col:
                for tag_idx, w in col.items():
                    scores[tag_idx] += w
        best, margin = _argmax_with_margin(scores)
        tags.append(BIO_TAGS[best])
        margins.append(margin)
        prev_tag = BIO_TAGS[best]
    return tags, margins


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def tag_sentence(
    model: TaggerModel,
    sentence: Sentence,
    extractor_id: str = "learned-tagger",
) -> list[EntityMention]:
    """Greedy decode into mentions; confidence is a logistic of the summed
    best-vs-second-best margins over the mention's tokens, clamped to [0,1]."""

    tags, margins = _predict_tags(model, sentence.surfaces())
    mentions = decode_bio(tags, sentence, extractor_id=extractor_id, confidence=0.0)
    out = []
    for m in mentions:
        first, last = m.token_range
        confidence = _logistic(sum(margins[first : last + 1]))
        out.append(replace(m, confidence=min(1.0, max(0.0, confidence))))
    return out


def tagging_accuracy(
    model: TaggerModel, corpus: Sequence[tuple[Sentence, Sequence[str]]]
) -> float:
    """Token-level accuracy of the model's greedy predictions."""

    correct = total = 0
    for sentence, gold in corpus:
        predicted, _ = _predict_tags(model, sentence.surfaces())
        correct += sum(1 for p, g in zip(predicted, gold) if p == g)
        total += len(gold)
    return correct / total if total else 0.0


def save_tagger(model: TaggerModel, path: str) -> None:
    """Write the versioned single-file format; bit-exact per model."""

    meta = model.metadata
    lines = [
        TAGGER_HEADER,
        f"format={meta.get('format', TAGGER_FORMAT_VERSION)}",
        f"created={meta.get('created', 0)}",
        f"seed={meta.get('seed', 0)}",
        f"epochs={meta.get('epochs', 0)}",
        f"corpus={meta.get('corpus', '')}",
        "tags=" + " ".join(model.tag_set),
        f"vocab {len(model.feature_vocabulary)}",
    ]
    lines.extend(model.feature_vocabulary)
    triples = [
        (tag_idx, feat_idx, weight)
        for feat_idx, col in model.weights.items()
        for tag_idx, weight in col.items()
    ]
    triples.sort(key=lambda t: (t[0], t[1]))
    lines.append(f"weights {len(triples)}")
    lines.extend(
        f"{tag_idx} {feat_idx} {format_float(w)}" for tag_idx, feat_idx, w in triples
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_tagger(path: str) -> TaggerModel:
    with open(path, "r", encoding="utf-8") as fh:
        reader = LineReader(iter(fh), source=path)
        header = reader.next("header")
        if header != TAGGER_HEADER:
            raise reader.fail(f"expected {TAGGER_HEADER!r} header, got {header!r}")
        meta_raw, section = read_metadata(reader, "vocab")
        tags_value = meta_raw.pop("tags", None)
        if tags_value is None or tuple(tags_value.split(" ")) != BIO_TAGS:
            raise ModelFormatError(f"{path}: tag set does not match the canonical BIO tags")
        vocab = read_vocab(reader, read_count(reader, section, "vocab"))
        count = read_count(reader, reader.next("weights section"), "weights")
        weights: dict[int, dict[int, float]] = {}
        for _ in range(count):
            parts = reader.next("weight triple").split(" ")
            if len(parts) != 3:
                raise reader.fail("expected 'tag_index feature_index weight'")
            try:
                tag_idx, feat_idx, weight = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise reader.fail(f"bad weight triple {parts!r}")
            if not 0 <= tag_idx < len(BIO_TAGS) or not 0 <= feat_idx < len(vocab):
                raise reader.fail("weight triple index out of range")
            weights.setdefault(feat_idx, {})[tag_idx] = weight
    metadata: dict[str, int | str] = {
        "format": parse_int(meta_raw, "format", path),
        "created": parse_int(meta_raw, "created", path),
        "seed": parse_int(meta_raw, "seed", path),
        "epochs": parse_int(meta_raw, "epochs", path),
        "corpus": meta_raw.get("corpus", ""),
    }
    return TaggerModel(feature_vocabulary=vocab, weights=weights, metadata=metadata)
