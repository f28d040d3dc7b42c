"""BIO tag codec: lossless round-trip between tag sequences and mention sets.

The decoder is total: ill-formed sequences are repaired (an I-X with no
compatible predecessor starts a new X mention) and unrecognized tag strings
are treated as O, so arbitrary length-correct input always decodes.
"""

from __future__ import annotations

from cner.ner.types import (
    ENTITY_TYPES,
    EntityMention,
    check_mentions,
    mention_span,
)
from cner.textcore import Sentence

# Canonical tag order; also the tie-break order for the learned tagger.
BIO_TAGS: tuple[str, ...] = (
    "O",
    *(f"B-{t}" for t in ENTITY_TYPES),
    *(f"I-{t}" for t in ENTITY_TYPES),
)
BIO_TAG_SET = frozenset(BIO_TAGS)


class LengthMismatchError(ValueError):
    """Tag sequence length differs from the sentence's token count."""


def encode_bio(sentence: Sentence, mentions: list[EntityMention]) -> list[str]:
    """Encode non-overlapping mentions as one tag per token."""

    check_mentions(sentence, mentions)
    tags = ["O"] * len(sentence.tokens)
    for m in mentions:
        first, last = m.token_range
        tags[first] = f"B-{m.entity_type}"
        for i in range(first + 1, last + 1):
            tags[i] = f"I-{m.entity_type}"
    return tags


def decode_bio(
    tags: list[str],
    sentence: Sentence,
    extractor_id: str = "",
    confidence: float = 1.0,
) -> list[EntityMention]:
    """Decode maximal B-X (I-X)* runs into mentions, repairing bad input."""

    if len(tags) != len(sentence.tokens):
        raise LengthMismatchError(
            f"{len(tags)} tags for {len(sentence.tokens)} tokens"
        )
    mentions: list[EntityMention] = []
    start: int | None = None
    current_type = ""

    def close(end: int) -> None:
        nonlocal start
        if start is not None:
            mentions.append(
                EntityMention(
                    span=mention_span(sentence, start, end),
                    token_range=(start, end),
                    entity_type=current_type,
                    sentence_index=sentence.index,
                    extractor_id=extractor_id,
                    confidence=confidence,
                )
            )
            start = None

    for i, tag in enumerate(tags):
        if tag in BIO_TAG_SET and tag != "O":
            prefix, entity_type = tag.split("-", 1)
            if prefix == "I" and start is not None and entity_type == current_type:
                continue
            close(i - 1)
            start = i
            current_type = entity_type
        else:
            close(i - 1)
    close(len(tags) - 1)
    return mentions
