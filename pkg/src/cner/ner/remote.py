"""HTTP adapter for plugging external NER services into the registry.

Wire contract: POST {"tokens": [...], "language": "es"} to the endpoint and
expect {"mentions": [{"type": "PER", "first": 0, "last": 0,
"confidence": 0.9}, ...]} back. Structural violations (non-200, bad JSON,
missing keys) raise ProtocolError; semantically invalid mentions (unknown
type, bad token range, overlap) are dropped with a warning so one rogue
mention cannot poison an otherwise usable response.
"""

from __future__ import annotations

import requests

from cner.ner.types import ENTITY_TYPE_SET, EntityMention, mention_span
from cner.textcore import Sentence


class RemoteUnavailableError(RuntimeError):
    """The remote extractor could not be reached or timed out."""


class ProtocolError(RuntimeError):
    """The remote extractor answered outside the adapter protocol."""


def remote_extract(
    endpoint: str,
    sentence: Sentence,
    timeout: float,
    extractor_id: str = "remote-adapter",
) -> tuple[list[EntityMention], list[str]]:
    """Query the endpoint for one sentence; returns (mentions, warnings)."""

    payload = {"tokens": list(sentence.surfaces()), "language": "es"}
    try:
        response = requests.post(endpoint, json=payload, timeout=timeout)
    except (requests.ConnectionError, requests.Timeout) as exc:
        raise RemoteUnavailableError(f"remote extractor {endpoint}: {exc}") from exc
    if response.status_code != 200:
        raise ProtocolError(
            f"remote extractor {endpoint} returned HTTP {response.status_code}"
        )
    try:
        body = response.json()
    except ValueError as exc:
        raise ProtocolError(f"remote extractor {endpoint}: response is not JSON") from exc
    if not isinstance(body, dict) or not isinstance(body.get("mentions"), list):
        raise ProtocolError(
            f"remote extractor {endpoint}: expected a 'mentions' list in the response"
        )

    mentions: list[EntityMention] = []
    warnings: list[str] = []
    taken: set[int] = set()
    token_count = len(sentence.tokens)
    for i, item in enumerate(body["mentions"]):
        if (
            not isinstance(item, dict)
            or not isinstance(item.get("type"), str)
            or not isinstance(item.get("first"), int)
            or not isinstance(item.get("last"), int)
            or isinstance(item.get("first"), bool)
            or isinstance(item.get("last"), bool)
        ):
            raise ProtocolError(
                f"remote extractor {endpoint}: mention {i} is malformed"
            )
        entity_type = item["type"]
        first, last = item["first"], item["last"]
        confidence = item.get("confidence", 1.0)
        if not isinstance(confidence, (int, float)) or isinstance(confidence, bool):
            raise ProtocolError(
                f"remote extractor {endpoint}: mention {i} has a non-numeric confidence"
            )
        if entity_type not in ENTITY_TYPE_SET:
            warnings.append(f"{extractor_id}: dropped mention {i} with unknown type {entity_type!r}")
            continue
        if not (0 <= first <= last < token_count):
            warnings.append(
                f"{extractor_id}: dropped mention {i} with out-of-range tokens [{first}, {last}]"
            )
            continue
        covered = set(range(first, last + 1))
        if covered & taken:
            warnings.append(f"{extractor_id}: dropped mention {i} overlapping an earlier one")
            continue
        taken |= covered
        mentions.append(
            EntityMention(
                span=mention_span(sentence, first, last),
                token_range=(first, last),
                entity_type=entity_type,
                sentence_index=sentence.index,
                extractor_id=extractor_id,
                confidence=min(1.0, max(0.0, float(confidence))),
            )
        )
    return mentions, warnings
