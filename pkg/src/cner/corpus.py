"""Training corpus formats with line-numbered diagnostics.

Two file formats feed the trainers: a two-column `token<TAB>tag` format for
the sequence tagger (blank line between sentences, '#' comments) and a
JSON-lines format for relations, one record per line:

    {"text": "...",
     "mentions": [{"start": 0, "end": 4, "type": "PER"}, ...],
     "relations": [{"arg1": 0, "arg2": 1, "label": "GPE-AFF"}, ...]}

Parsers are total over arbitrary bytes: anything that is not a valid corpus
becomes a ParseError (shape) or ValidationError (invariant breach), both
carrying the offending line number. Mentions must align exactly to token
boundaries after segmentation; a span that splits a token is an error, not
something to silently snap, because silent correction hides corpus bugs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from cner.ner.bio import BIO_TAG_SET
from cner.ner.types import ENTITY_TYPE_SET, EntityMention, mention_span
from cner.relex.features import extract_features, generate_pairs
from cner.relex.types import NON_REL, RELATION_LABEL_SET
from cner.textcore import Document, Sentence, segment, sentence_from_tokens


class ParseError(ValueError):
    """Input does not match the corpus file format."""

    def __init__(self, source: str, lineno: int, message: str):
        super().__init__(f"{source}:{lineno}: {message}")
        self.source = source
        self.lineno = lineno


class ValidationError(ValueError):
    """Input parses but violates a corpus invariant."""

    def __init__(self, source: str, lineno: int, message: str):
        super().__init__(f"{source}:{lineno}: {message}")
        self.source = source
        self.lineno = lineno


@dataclass(frozen=True)
class NerCorpus:
    sentences: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]  # (tokens, tags)

    def __len__(self) -> int:
        return len(self.sentences)

    def training_pairs(self) -> list[tuple[Sentence, tuple[str, ...]]]:
        return [
            (sentence_from_tokens(tokens, index=0), tags)
            for tokens, tags in self.sentences
        ]


@dataclass(frozen=True)
class AlignedMention:
    start: int
    end: int
    entity_type: str
    sentence_index: int
    token_range: tuple[int, int]


@dataclass(frozen=True)
class RelRecord:
    text: str
    mentions: tuple[AlignedMention, ...]
    relations: tuple[tuple[int, int, str], ...]  # (arg1 index, arg2 index, label)
    document: Document


@dataclass(frozen=True)
class RelCorpus:
    records: tuple[RelRecord, ...]

    def __len__(self) -> int:
        return len(self.records)


def _decode(data: bytes, source: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(source, 0, f"file is not valid UTF-8: {exc}") from None


def parse_ner_corpus(path: str) -> NerCorpus:
    with open(path, "rb") as fh:
        return parse_ner_corpus_bytes(fh.read(), source=path)


def parse_ner_corpus_bytes(data: bytes, source: str = "<memory>") -> NerCorpus:
    text = _decode(data, source)
    sentences: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    tokens: list[str] = []
    tags: list[str] = []
    prev_type: str | None = None

    def flush() -> None:
        nonlocal prev_type
        if tokens:
            sentences.append((tuple(tokens), tuple(tags)))
            tokens.clear()
            tags.clear()
        prev_type = None

    for lineno, line in enumerate(text.split("\n"), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            flush()
            continue
        columns = line.rstrip("\n").split("\t")
        if len(columns) != 2:
            raise ParseError(
                source, lineno, f"expected 'token<TAB>tag', got {len(columns)} columns"
            )
        token, tag = columns[0], columns[1].strip()
        if not token or any(c.isspace() for c in token):
            raise ValidationError(source, lineno, f"invalid token {token!r}")
        if tag not in BIO_TAG_SET:
            raise ValidationError(source, lineno, f"unknown tag {tag!r}")
        if tag.startswith("I-") and prev_type != tag[2:]:
            raise ValidationError(
                source, lineno, f"{tag} has no preceding {tag[2:]} tag"
            )
        prev_type = tag[2:] if tag != "O" else None
        tokens.append(token)
        tags.append(tag)
    flush()
    return NerCorpus(sentences=tuple(sentences))


def _require(condition: bool, source: str, lineno: int, message: str) -> None:
    if not condition:
        raise ValidationError(source, lineno, message)


def _align_mention(
    document: Document, start: int, end: int, source: str, lineno: int, which: str
) -> tuple[int, tuple[int, int]]:
    """Locate the (sentence, token range) whose character extent is exactly
    [start, end); misalignment is a validation error."""

    for sentence in document.sentences:
        if not (sentence.span.start <= start and end <= sentence.span.end):
            continue
        first = last = None
        for token in sentence.tokens:
            if token.span.start == start:
                first = token.index
            if token.span.end == end:
                last = token.index
        _require(
            first is not None and last is not None and first <= last,
            source,
            lineno,
            f"{which} [{start}, {end}) does not align to token boundaries",
        )
        return sentence.index, (first, last)
    raise ValidationError(
        source, lineno, f"{which} [{start}, {end}) does not lie within one sentence"
    )


def parse_re_corpus(path: str, abbreviations: frozenset[str] | None = None) -> RelCorpus:
    with open(path, "rb") as fh:
        return parse_re_corpus_bytes(fh.read(), source=path, abbreviations=abbreviations)


def parse_re_corpus_bytes(
    data: bytes,
    source: str = "<memory>",
    abbreviations: frozenset[str] | None = None,
) -> RelCorpus:
    text = _decode(data, source)
    records: list[RelRecord] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(source, lineno, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict) or not isinstance(obj.get("text"), str):
            raise ParseError(source, lineno, "record must be an object with a 'text' string")
        raw_mentions = obj.get("mentions", [])
        raw_relations = obj.get("relations", [])
        if not isinstance(raw_mentions, list) or not isinstance(raw_relations, list):
            raise ParseError(source, lineno, "'mentions' and 'relations' must be lists")

        document = segment(obj["text"], id=f"record-{lineno}", abbreviations=abbreviations)
        mentions: list[AlignedMention] = []
        occupied: dict[int, set[int]] = {}
        for i, m in enumerate(raw_mentions):
            if (
                not isinstance(m, dict)
                or not isinstance(m.get("start"), int)
                or not isinstance(m.get("end"), int)
                or not isinstance(m.get("type"), str)
                or isinstance(m.get("start"), bool)
                or isinstance(m.get("end"), bool)
            ):
                raise ParseError(source, lineno, f"mention {i} must have integer start/end and a type")
            start, end, entity_type = m["start"], m["end"], m["type"]
            _require(entity_type in ENTITY_TYPE_SET, source, lineno, f"mention {i}: unknown type {entity_type!r}")
            _require(0 <= start < end <= len(document.text), source, lineno, f"mention {i}: span [{start}, {end}) out of bounds")
            sentence_index, token_range = _align_mention(
                document, start, end, source, lineno, f"mention {i}"
            )
            covered = set(range(token_range[0], token_range[1] + 1))
            _require(
                not (covered & occupied.get(sentence_index, set())),
                source,
                lineno,
                f"mention {i} overlaps another mention",
            )
            occupied.setdefault(sentence_index, set()).update(covered)
            mentions.append(AlignedMention(start, end, entity_type, sentence_index, token_range))

        relations: list[tuple[int, int, str]] = []
        seen_pairs: set[tuple[int, int]] = set()
        for i, r in enumerate(raw_relations):
            if (
                not isinstance(r, dict)
                or not isinstance(r.get("arg1"), int)
                or not isinstance(r.get("arg2"), int)
                or not isinstance(r.get("label"), str)
                or isinstance(r.get("arg1"), bool)
                or isinstance(r.get("arg2"), bool)
            ):
                raise ParseError(source, lineno, f"relation {i} must have integer args and a label")
            a1, a2, label = r["arg1"], r["arg2"], r["label"]
            _require(label in RELATION_LABEL_SET, source, lineno, f"relation {i}: unknown label {label!r}")
            _require(0 <= a1 < len(mentions) and 0 <= a2 < len(mentions), source, lineno, f"relation {i}: mention index out of range")
            _require(a1 != a2, source, lineno, f"relation {i}: arg1 and arg2 are the same mention")
            m1, m2 = mentions[a1], mentions[a2]
            _require(
                m1.sentence_index == m2.sentence_index,
                source,
                lineno,
                f"relation {i}: arguments lie in different sentences",
            )
            _require(m1.start < m2.start, source, lineno, f"relation {i}: arg1 must precede arg2")
            _require((a1, a2) not in seen_pairs, source, lineno, f"relation {i}: duplicate pair")
            seen_pairs.add((a1, a2))
            relations.append((a1, a2, label))
        records.append(
            RelRecord(
                text=document.text,
                mentions=tuple(mentions),
                relations=tuple(relations),
                document=document,
            )
        )
    return RelCorpus(records=tuple(records))


def build_re_instances(
    corpus: RelCorpus, max_token_distance: int = 50
) -> list[tuple[set[str], str]]:
    """Turn records into (features, gold label) pairs.

    Every generated pair without a listed relation is an implicit NON-REL
    negative; listed relations beyond the distance cap produce no instance.
    """

    instances: list[tuple[set[str], str]] = []
    for record in corpus.records:
        gold: dict[tuple[int, tuple[int, int], int, tuple[int, int]], str] = {}
        for a1, a2, label in record.relations:
            m1, m2 = record.mentions[a1], record.mentions[a2]
            gold[(m1.sentence_index, m1.token_range, m2.sentence_index, m2.token_range)] = label
        by_sentence: dict[int, list[EntityMention]] = {}
        for m in record.mentions:
            sentence = record.document.sentences[m.sentence_index]
            by_sentence.setdefault(m.sentence_index, []).append(
                EntityMention(
                    span=mention_span(sentence, *m.token_range),
                    token_range=m.token_range,
                    entity_type=m.entity_type,
                    sentence_index=m.sentence_index,
                    extractor_id="gold",
                    confidence=1.0,
                )
            )
        for sentence_index, sentence_mentions in sorted(by_sentence.items()):
            sentence = record.document.sentences[sentence_index]
            for pair in generate_pairs(sentence, sentence_mentions, max_token_distance):
                key = (
                    sentence_index,
                    pair.arg1.token_range,
                    sentence_index,
                    pair.arg2.token_range,
                )
                label = gold.get(key, NON_REL)
                instances.append(
                    (extract_features(pair, sentence, all_mentions=sentence_mentions), label)
                )
    return instances


def write_re_corpus(records: Sequence[dict], path: str) -> None:
    """Write raw record dicts as JSON lines (fixture/round-trip helper)."""

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
