"""File ingestion: turn an uploaded .txt/.odt/.doc into raw text.

.doc is the binary legacy format and is only handled through an optional
external converter command; without one the upload is rejected with
guidance rather than half-parsed.
"""

from __future__ import annotations

import io
import shlex
import subprocess
import tempfile
import zipfile
from xml.etree import ElementTree

_ODF_TEXT_NS = "urn:oasis:names:tc:opendocument:xmlns:text:1.0"
_CONVERTER_TIMEOUT_S = 30


class IngestError(Exception):
    """Rejected upload; carries the HTTP status and stable error code."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code


def _payload_too_large(size: int, limit: int) -> IngestError:
    return IngestError(
        413, "PayloadTooLarge", f"upload of {size} bytes exceeds the {limit} byte limit"
    )


def extract_odt_text(data: bytes) -> str:
    """Paragraph text from an OpenDocument archive, one paragraph per line."""

    try:
        with zipfile.ZipFile(io.BytesIO(data)) as archive:
            content = archive.read("content.xml")
    except (zipfile.BadZipFile, KeyError) as exc:
        raise IngestError(400, "CorruptFile", f"not a valid .odt archive: {exc}") from exc
    try:
        root = ElementTree.fromstring(content)
    except ElementTree.ParseError as exc:
        raise IngestError(400, "CorruptFile", f"content.xml is not valid XML: {exc}") from exc
    paragraphs = []
    for element in root.iter():
        if element.tag in (f"{{{_ODF_TEXT_NS}}}p", f"{{{_ODF_TEXT_NS}}}h"):
            paragraphs.append("".join(element.itertext()))
    return "\n".join(paragraphs)


def _convert_doc(data: bytes, converter: str) -> str:
    with tempfile.NamedTemporaryFile(suffix=".doc") as tmp:
        tmp.write(data)
        tmp.flush()
        try:
            result = subprocess.run(
                [*shlex.split(converter), tmp.name],
                capture_output=True,
                timeout=_CONVERTER_TIMEOUT_S,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise IngestError(400, "CorruptFile", f".doc converter failed: {exc}") from exc
    if result.returncode != 0:
        detail = result.stderr.decode("utf-8", errors="replace").strip()[:200]
        raise IngestError(
            400, "CorruptFile", f".doc converter exited with {result.returncode}: {detail}"
        )
    return result.stdout.decode("utf-8", errors="replace")


def ingest_file(
    filename: str,
    data: bytes,
    max_bytes: int,
    doc_converter: str | None = None,
) -> tuple[str, list[str]]:
    """Decode an upload into raw text; returns (text, warnings)."""

    if len(data) > max_bytes:
        raise _payload_too_large(len(data), max_bytes)
    name = filename.lower()
    warnings: list[str] = []
    if name.endswith(".txt"):
        try:
            return data.decode("utf-8"), warnings
        except UnicodeDecodeError:
            warnings.append(f"{filename}: not valid UTF-8, decoded as Latin-1")
            return data.decode("latin-1"), warnings
    if name.endswith(".odt"):
        return extract_odt_text(data), warnings
    if name.endswith(".doc"):
        if doc_converter is None:
            raise IngestError(
                415,
                "UnsupportedFormat",
                ".doc uploads need an external converter; set doc_converter in the "
                "configuration (a command that prints plain text for a .doc path)",
            )
        return _convert_doc(data, doc_converter), warnings
    raise IngestError(
        415,
        "UnsupportedFormat",
        f"unsupported file type {filename!r}; supported extensions: .txt, .odt, .doc",
    )
