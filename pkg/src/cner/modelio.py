"""Shared pieces of the versioned single-file model formats.

Both learned models serialize to a line-oriented UTF-8 text file: a header,
key=value metadata, a vocabulary section (one feature string per line, the
line position is the column index) and sparse weight triples. Serialization
is bit-exact for a given model: floats are written with repr(), which
round-trips exactly, and all sections are emitted in a fixed order.
"""

from __future__ import annotations

import hashlib
import os
from typing import Iterable, Iterator


class ModelFormatError(ValueError):
    """Model file violates its declared format."""


def format_float(value: float) -> str:
    return repr(float(value))


def fingerprint(chunks: Iterable[str]) -> str:
    """Stable hex fingerprint of a canonical corpus encoding."""

    digest = hashlib.sha256()
    for chunk in chunks:
        digest.update(chunk.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def created_timestamp() -> int:
    """Training timestamp recorded in model metadata.

    Deterministic by default (0) so identical training runs produce
    byte-identical model files; set SOURCE_DATE_EPOCH to record a real time.
    """

    return int(os.environ.get("SOURCE_DATE_EPOCH", "0"))


class LineReader:
    """Line cursor with format-error diagnostics carrying line numbers."""

    def __init__(self, lines: Iterator[str], source: str):
        self._lines = lines
        self.source = source
        self.lineno = 0

    def next(self, what: str) -> str:
        try:
            line = next(self._lines)
        except StopIteration:
            raise ModelFormatError(f"{self.source}: unexpected end of file, expected {what}")
        self.lineno += 1
        return line.rstrip("\n")

    def fail(self, message: str) -> ModelFormatError:
        return ModelFormatError(f"{self.source}:{self.lineno}: {message}")


def read_metadata(reader: LineReader, until: str) -> tuple[dict[str, str], str]:
    """Read key=value lines up to (and consuming) the `until` section line."""

    meta: dict[str, str] = {}
    while True:
        line = reader.next(f"metadata or '{until}' section")
        if line.startswith(until + " ") or line == until:
            return meta, line
        if "=" not in line:
            raise reader.fail(f"expected key=value metadata, got {line!r}")
        key, value = line.split("=", 1)
        meta[key] = value


def read_count(reader: LineReader, line: str, section: str) -> int:
    parts = line.split(" ")
    if len(parts) != 2 or parts[0] != section:
        raise reader.fail(f"expected '{section} <count>', got {line!r}")
    try:
        count = int(parts[1])
    except ValueError:
        raise reader.fail(f"bad {section} count {parts[1]!r}")
    if count < 0:
        raise reader.fail(f"negative {section} count")
    return count


def read_vocab(reader: LineReader, count: int) -> dict[str, int]:
    vocab: dict[str, int] = {}
    for index in range(count):
        feature = reader.next("vocabulary entry")
        if not feature or feature in vocab:
            raise reader.fail(f"empty or duplicate vocabulary entry {feature!r}")
        vocab[feature] = index
    return vocab


def parse_int(meta: dict[str, str], key: str, source: str) -> int:
    try:
        return int(meta[key])
    except KeyError:
        raise ModelFormatError(f"{source}: missing metadata key {key!r}")
    except ValueError:
        raise ModelFormatError(f"{source}: metadata {key}={meta[key]!r} is not an integer")
