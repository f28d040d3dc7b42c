"""Entity type inventory and the mention value type."""

from __future__ import annotations

from dataclasses import dataclass

from cner.textcore import Sentence, Span

# Closed set, canonical declaration order. Serialized as the uppercase codes.
ENTITY_TYPES: tuple[str, ...] = ("PER", "ORG", "FAC", "LOC", "GPE", "VEH", "WEA")
ENTITY_TYPE_SET = frozenset(ENTITY_TYPES)


class OverlappingMentionsError(ValueError):
    """Two mentions from the same extractor share a token."""


class MentionOutOfRangeError(ValueError):
    """A mention's token_range exceeds its sentence's token count."""


@dataclass(frozen=True)
class EntityMention:
    """A typed token span, document-absolute, with extractor attribution.

    token_range is (first, last) inclusive within the owning sentence; span
    is the union of the covered tokens' character spans.
    """

    span: Span
    token_range: tuple[int, int]
    entity_type: str
    sentence_index: int
    extractor_id: str
    confidence: float

    def identity(self) -> tuple[int, tuple[int, int], str]:
        """Mention identity modulo extractor attribution and confidence."""

        return (self.sentence_index, self.token_range, self.entity_type)


def mention_span(sentence: Sentence, first: int, last: int) -> Span:
    return Span(sentence.tokens[first].span.start, sentence.tokens[last].span.end)


def check_mentions(sentence: Sentence, mentions: list[EntityMention]) -> None:
    """Validate token ranges against the sentence and reject overlaps."""

    seen: set[int] = set()
    for m in mentions:
        first, last = m.token_range
        if not (0 <= first <= last < len(sentence.tokens)):
            raise MentionOutOfRangeError(
                f"token_range {m.token_range} outside sentence of "
                f"{len(sentence.tokens)} tokens"
            )
        covered = set(range(first, last + 1))
        if covered & seen:
            raise OverlappingMentionsError(f"mentions overlap at tokens {sorted(covered & seen)}")
        seen |= covered
