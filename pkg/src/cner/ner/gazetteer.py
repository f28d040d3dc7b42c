"""Gazetteer lookup extractor: longest-match scan over known surface forms."""

from __future__ import annotations

from dataclasses import dataclass, field

from cner.ner.types import ENTITY_TYPE_SET, EntityMention, mention_span
from cner.textcore import Sentence

# Lowercase words never promoted to PER by the capitalization heuristic when
# they open a sentence.
SENTENCE_INITIAL_FUNCTION_WORDS = frozenset(
    """el la los las un una unos unas lo al del de en a y o u e que se su sus
    mi mis tu tus con por para sin sobre entre hay es son fue eran como cuando
    donde si no ya""".split()
)


@dataclass
class Gazetteer:
    """Token-sequence lookup table mapping surface forms to entity types.

    Matching is case-sensitive except for the first token of a match that
    starts the sentence, where sentence-initial capitalization would
    otherwise hide known entries.
    """

    name: str = "gazetteer"
    _exact: dict[tuple[str, ...], str] = field(default_factory=dict)
    _initial: dict[tuple[str, ...], str] = field(default_factory=dict)
    _max_len: int = 0

    def __len__(self) -> int:
        return len(self._exact)

    def add(self, tokens: tuple[str, ...], entity_type: str) -> None:
        if not tokens or any(not t or any(c.isspace() for c in t) for t in tokens):
            raise ValueError(f"invalid gazetteer token sequence {tokens!r}")
        if entity_type not in ENTITY_TYPE_SET:
            raise ValueError(f"unknown entity type {entity_type!r}")
        if tokens in self._exact:
            raise ValueError(f"duplicate gazetteer entry {' '.join(tokens)!r}")
        self._exact[tokens] = entity_type
        # First entry wins when two differ only in first-token case.
        self._initial.setdefault((tokens[0].casefold(), *tokens[1:]), entity_type)
        self._max_len = max(self._max_len, len(tokens))

    def lookup(self, tokens: tuple[str, ...], sentence_initial: bool) -> str | None:
        hit = self._exact.get(tokens)
        if hit is None and sentence_initial:
            hit = self._initial.get((tokens[0].casefold(), *tokens[1:]))
        return hit

    @property
    def max_entry_len(self) -> int:
        return self._max_len


def load_gazetteer(path: str, name: str | None = None) -> Gazetteer:
    """Read `TYPE<TAB>token token ...` lines; '#' starts a comment."""

    gaz = Gazetteer(name=name or path)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected TYPE<TAB>tokens")
            entity_type, surface = parts[0].strip(), parts[1].strip()
            try:
                gaz.add(tuple(surface.split()), entity_type)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return gaz


def _is_capitalized(surface: str) -> bool:
    return surface[0].isalpha() and surface[0].isupper()


def gazetteer_extract(
    sentence: Sentence,
    gazetteer: Gazetteer,
    heuristic_caps: bool = False,
    extractor_id: str = "rule-gazetteer",
) -> list[EntityMention]:
    """Left-to-right longest-match scan; matches never overlap.

    With heuristic_caps, maximal runs of capitalized tokens left uncovered by
    the scan become PER mentions at confidence 0.5, except a sentence-initial
    function word, which only looks capitalized because it opens the
    sentence.
    """

    surfaces = sentence.surfaces()
    n = len(surfaces)
    mentions: list[EntityMention] = []
    covered = [False] * n
    i = 0
    while i < n:
        matched = False
        for length in range(min(gazetteer.max_entry_len, n - i), 0, -1):
            entity_type = gazetteer.lookup(surfaces[i : i + length], sentence_initial=i == 0)
            if entity_type is not None:
                mentions.append(
                    EntityMention(
                        span=mention_span(sentence, i, i + length - 1),
                        token_range=(i, i + length - 1),
                        entity_type=entity_type,
                        sentence_index=sentence.index,
                        extractor_id=extractor_id,
                        confidence=1.0,
                    )
                )
                for k in range(i, i + length):
                    covered[k] = True
                i += length
                matched = True
                break
        if not matched:
            i += 1

    if heuristic_caps:
        candidate = [
            not covered[i] and _is_capitalized(surfaces[i]) for i in range(n)
        ]
        if n and candidate[0] and surfaces[0].lower() in SENTENCE_INITIAL_FUNCTION_WORDS:
            candidate[0] = False
        i = 0
        while i < n:
            if not candidate[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and candidate[j + 1]:
                j += 1
            mentions.append(
                EntityMention(
                    span=mention_span(sentence, i, j),
                    token_range=(i, j),
                    entity_type="PER",
                    sentence_index=sentence.index,
                    extractor_id=extractor_id,
                    confidence=0.5,
                )
            )
            i = j + 1
        mentions.sort(key=lambda m: m.token_range)
    return mentions
