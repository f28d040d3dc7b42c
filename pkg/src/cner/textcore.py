"""Text normalization and segmentation with exact span provenance.

Every annotation downstream (mentions, relations) points back into the
normalized document text through character offsets, so the contract here is
strict: offsets are Unicode scalar values (not bytes), slicing the text with
a span reproduces the surface form exactly, and every non-whitespace
character ends up inside exactly one token. All functions are pure and
deterministic; they are safe to call from concurrent request handlers.

Sentence boundaries are placed after '.', '!', '?' or '…' when followed by
whitespace and then an uppercase letter, an opening '¿'/'¡', a digit, or the
end of the text. A '.' is never a boundary when it closes a protected
abbreviation (configurable list), sits between two digits, or terminates a
single-uppercase-letter initial. A blank line always starts a new sentence.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

__all__ = [
    "Span",
    "Token",
    "Sentence",
    "Document",
    "default_abbreviations",
    "load_abbreviations",
    "normalize_text",
    "split_sentences",
    "tokenize",
    "segment",
    "sentence_from_tokens",
]

SENTENCE_TERMINATORS = frozenset(".!?…")
OPENERS = frozenset("¿¡([{«\"'")
CLOSERS = frozenset("?!)]}»\"',;:.…")

_BLANK_LINE = re.compile(r"\n[ \t]*\n\s*")


@dataclass(frozen=True)
class Span:
    """Half-open [start, end) character interval into a document text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not 0 <= self.start <= self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def slice(self, text: str) -> str:
        return text[self.start : self.end]


@dataclass(frozen=True)
class Token:
    span: Span
    surface: str
    index: int


@dataclass(frozen=True)
class Sentence:
    span: Span
    tokens: tuple[Token, ...]
    index: int

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    language: str
    source: str
    sentences: tuple[Sentence, ...]


def default_abbreviations() -> frozenset[str]:
    """Protected abbreviations shipped with the package (casefolded)."""

    with resources.files("cner.data").joinpath("abbreviations_es.txt").open(
        "r", encoding="utf-8"
    ) as fh:
        return _parse_abbreviation_lines(fh, source="<builtin>")


def load_abbreviations(path: str) -> frozenset[str]:
    """Load an abbreviation list: one entry per line, '#' comments.

    Entries must carry their trailing '.'; a missing dot is a config error.
    """

    with open(path, "r", encoding="utf-8") as fh:
        return _parse_abbreviation_lines(fh, source=path)


def _parse_abbreviation_lines(lines: Iterable[str], source: str) -> frozenset[str]:
    entries = set()
    for lineno, raw in enumerate(lines, start=1):
        entry = raw.split("#", 1)[0].strip()
        if not entry:
            continue
        if not entry.endswith("."):
            raise ValueError(
                f"{source}:{lineno}: abbreviation {entry!r} must end with '.'"
            )
        entries.add(entry.casefold())
    return frozenset(entries)


def normalize_text(raw: str) -> str:
    """Canonically compose the text and force LF line endings. Idempotent."""

    return unicodedata.normalize("NFC", raw.replace("\r\n", "\n").replace("\r", "\n"))


def _protected_dot(text: str, i: int, abbreviations: frozenset[str]) -> bool:
    """True when the '.' at position i must not act as punctuation.

    Covers decimals (digit '.' digit), protected abbreviations and
    single-uppercase-letter initials. The candidate abbreviation token is the
    maximal run of letters and dots ending at i.
    """

    if 0 < i < len(text) - 1 and text[i - 1].isdigit() and text[i + 1].isdigit():
        return True
    j = i
    while j > 0 and (text[j - 1].isalpha() or text[j - 1] == "."):
        j -= 1
    token = text[j : i + 1]
    if token.casefold() in abbreviations:
        return True
    return len(token) == 2 and token[0].isalpha() and token[0].isupper()


def split_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[Span]:
    """Split normalized text into trimmed, non-overlapping sentence spans."""

    if abbreviations is None:
        abbreviations = default_abbreviations()
    cuts: set[int] = set()
    for match in _BLANK_LINE.finditer(text):
        cuts.add(match.end())
    n = len(text)
    for i, ch in enumerate(text):
        if ch not in SENTENCE_TERMINATORS:
            continue
        if ch == "." and _protected_dot(text, i, abbreviations):
            continue
        if i + 1 >= n or not text[i + 1].isspace():
            continue
        k = i + 1
        while k < n and text[k].isspace():
            k += 1
        if k == n or text[k].isupper() or text[k].isdigit() or text[k] in "¿¡":
            cuts.add(k)

    spans: list[Span] = []
    starts = [0, *sorted(c for c in cuts if 0 < c < n)]
    for idx, seg_start in enumerate(starts):
        seg_end = starts[idx + 1] if idx + 1 < len(starts) else n
        a, b = seg_start, seg_end
        while a < b and text[a].isspace():
            a += 1
        while b > a and text[b - 1].isspace():
            b -= 1
        if a < b:
            spans.append(Span(a, b))
    return spans


def tokenize(
    sentence_text: str,
    base_offset: int = 0,
    abbreviations: frozenset[str] | None = None,
) -> list[Token]:
    """Tokenize one sentence; spans are document-absolute via base_offset.

    Whitespace separates chunks; opening punctuation is peeled from the
    front and closing punctuation from the back of each chunk, one character
    per token. A trailing '.' stays attached while the remaining chunk is a
    protected abbreviation. Internal characters never split, which keeps
    decimals ('3,5'), hyphenated words and clitics whole.
    """

    if abbreviations is None:
        abbreviations = default_abbreviations()
    pieces: list[tuple[int, int]] = []
    n = len(sentence_text)
    i = 0
    while i < n:
        if sentence_text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not sentence_text[j].isspace():
            j += 1
        pieces.extend(_split_chunk(sentence_text, i, j, abbreviations))
        i = j
    return [
        Token(Span(base_offset + a, base_offset + b), sentence_text[a:b], idx)
        for idx, (a, b) in enumerate(pieces)
    ]


def _split_chunk(
    text: str, start: int, end: int, abbreviations: frozenset[str]
) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    s, e = start, end
    while s < e and text[s] in OPENERS:
        out.append((s, s + 1))
        s += 1
    tail: list[tuple[int, int]] = []
    while e - s > 1 and text[e - 1] in CLOSERS:
        if text[e - 1] == "." and text[s:e].casefold() in abbreviations:
            break
        tail.append((e - 1, e))
        e -= 1
    if s < e:
        out.append((s, e))
    out.extend(reversed(tail))
    return out


def segment(
    raw: str,
    id: str = "doc",
    source: str = "manual input",
    abbreviations: frozenset[str] | None = None,
) -> Document:
    """Normalize, split and tokenize raw text into a Document."""

    if abbreviations is None:
        abbreviations = default_abbreviations()
    text = normalize_text(raw)
    sentences = []
    for index, span in enumerate(split_sentences(text, abbreviations)):
        tokens = tokenize(span.slice(text), span.start, abbreviations)
        sentences.append(Sentence(span, tuple(tokens), index))
    return Document(id=id, text=text, language="es", source=source, sentences=tuple(sentences))


def sentence_from_tokens(surfaces: Iterable[str], index: int = 0) -> Sentence:
    """Build a synthetic single-sentence view over space-joined tokens.

    Used when a corpus supplies tokens directly (no original text exists);
    spans index into the implied ' '-joined surface.
    """

    tokens = []
    offset = 0
    for i, surface in enumerate(surfaces):
        if not surface or any(c.isspace() for c in surface):
            raise ValueError(f"invalid token surface {surface!r}")
        tokens.append(Token(Span(offset, offset + len(surface)), surface, i))
        offset += len(surface) + 1
    end = tokens[-1].span.end if tokens else 0
    return Sentence(Span(0, end), tuple(tokens), index)
