"""Relation label inventory and the pair/instance value types."""

from __future__ import annotations

from dataclasses import dataclass

from cner.ner.types import EntityMention

# Closed set, canonical order; NON-REL is the designated no-relation class
# and wins exact score ties.
RELATION_LABELS: tuple[str, ...] = ("GPE-AFF", "PHYS", "DISC", "EMP-ORG", "ART", "NON-REL")
RELATION_LABEL_SET = frozenset(RELATION_LABELS)
NON_REL = "NON-REL"
LABEL_INDEX = {label: i for i, label in enumerate(RELATION_LABELS)}


@dataclass(frozen=True)
class MentionPair:
    """An ordered mention pair within one sentence; arg1 starts first."""

    sentence_index: int
    arg1: EntityMention
    arg2: EntityMention

    def __post_init__(self) -> None:
        if self.arg1.sentence_index != self.arg2.sentence_index:
            raise ValueError("pair arguments must share a sentence")
        if self.arg1.token_range[0] >= self.arg2.token_range[0]:
            raise ValueError("arg1 must start strictly before arg2")
        if self.arg1.token_range[1] >= self.arg2.token_range[0]:
            raise ValueError("pair arguments must not overlap")


@dataclass(frozen=True)
class RelationInstance:
    """A classified pair: predicted label plus the 6 per-label scores."""

    pair: MentionPair
    label: str
    scores: tuple[float, ...]
