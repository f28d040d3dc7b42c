"""Extractor registry: the selectable NER back-ends behind one interface.

Every extractor is a callable taking a Sentence and returning
(mentions, warnings). The default registry holds the three built-in kinds:
the always-ready gazetteer scan, the learned tagger (ready once a model is
loaded) and the remote adapter (ready once an endpoint is configured).
Additional remote extractors can be registered from configuration.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from cner.ner.gazetteer import Gazetteer, gazetteer_extract
from cner.ner.perceptron import TaggerModel, tag_sentence
from cner.ner.remote import remote_extract
from cner.ner.types import EntityMention
from cner.textcore import Sentence

ExtractFn = Callable[[Sentence], tuple[list[EntityMention], list[str]]]

RULE_EXTRACTOR_ID = "rule-gazetteer"
LEARNED_EXTRACTOR_ID = "learned-tagger"
REMOTE_EXTRACTOR_ID = "remote-adapter"


class UnknownExtractorError(KeyError):
    """No extractor registered under the requested id."""


@dataclass(frozen=True)
class ExtractorDescriptor:
    id: str
    display_name: str
    kind: str  # rule | learned | remote
    ready: bool
    detail: str


@dataclass(frozen=True)
class RegisteredExtractor:
    descriptor: ExtractorDescriptor
    extract: ExtractFn


class ExtractorRegistry:
    """Concurrent-read registry; registration is serialized by a lock."""

    def __init__(self) -> None:
        self._entries: dict[str, RegisteredExtractor] = {}
        self._lock = threading.Lock()

    def register(self, descriptor: ExtractorDescriptor, extract: ExtractFn) -> None:
        with self._lock:
            if descriptor.id in self._entries:
                raise ValueError(f"duplicate extractor id {descriptor.id!r}")
            self._entries[descriptor.id] = RegisteredExtractor(descriptor, extract)

    def list(self) -> list[ExtractorDescriptor]:
        return [self._entries[k].descriptor for k in sorted(self._entries)]

    def resolve(self, extractor_id: str) -> RegisteredExtractor:
        try:
            return self._entries[extractor_id]
        except KeyError:
            raise UnknownExtractorError(extractor_id) from None

    def ready_count(self) -> int:
        return sum(1 for e in self._entries.values() if e.descriptor.ready)


class _GazetteerExtractor:
    def __init__(self, gazetteer: Gazetteer, heuristic_caps: bool):
        self._gazetteer = gazetteer
        self._heuristic_caps = heuristic_caps

    def __call__(self, sentence: Sentence) -> tuple[list[EntityMention], list[str]]:
        return (
            gazetteer_extract(
                sentence,
                self._gazetteer,
                heuristic_caps=self._heuristic_caps,
                extractor_id=RULE_EXTRACTOR_ID,
            ),
            [],
        )


class _TaggerExtractor:
    def __init__(self, model: TaggerModel | None):
        self._model = model

    def __call__(self, sentence: Sentence) -> tuple[list[EntityMention], list[str]]:
        if self._model is None:
            raise RuntimeError("learned tagger has no model loaded")
        return tag_sentence(self._model, sentence, extractor_id=LEARNED_EXTRACTOR_ID), []


class _RemoteExtractor:
    def __init__(self, extractor_id: str, endpoint: str | None, timeout: float):
        self._id = extractor_id
        self._endpoint = endpoint
        self._timeout = timeout

    def __call__(self, sentence: Sentence) -> tuple[list[EntityMention], list[str]]:
        if self._endpoint is None:
            raise RuntimeError(f"remote extractor {self._id} has no endpoint configured")
        return remote_extract(
            self._endpoint, sentence, timeout=self._timeout, extractor_id=self._id
        )


def build_registry(
    gazetteer: Gazetteer | None = None,
    gazetteer_detail: str = "built-in empty gazetteer",
    heuristic_caps: bool = False,
    tagger: TaggerModel | None = None,
    tagger_detail: str = "no model loaded",
    remote_endpoint: str | None = None,
    remote_timeout: float = 5.0,
    extra_remotes: dict[str, str] | None = None,
) -> ExtractorRegistry:
    """Assemble the default three extractors plus any extra remotes."""

    registry = ExtractorRegistry()
    registry.register(
        ExtractorDescriptor(
            id=RULE_EXTRACTOR_ID,
            display_name="Gazetteer rules",
            kind="rule",
            ready=True,
            detail=gazetteer_detail,
        ),
        _GazetteerExtractor(gazetteer if gazetteer is not None else Gazetteer(), heuristic_caps),
    )
    registry.register(
        ExtractorDescriptor(
            id=LEARNED_EXTRACTOR_ID,
            display_name="Learned tagger",
            kind="learned",
            ready=tagger is not None,
            detail=tagger_detail,
        ),
        _TaggerExtractor(tagger),
    )
    registry.register(
        ExtractorDescriptor(
            id=REMOTE_EXTRACTOR_ID,
            display_name="Remote adapter",
            kind="remote",
            ready=remote_endpoint is not None,
            detail=remote_endpoint or "no endpoint configured",
        ),
        _RemoteExtractor(REMOTE_EXTRACTOR_ID, remote_endpoint, remote_timeout),
    )
    for extractor_id, endpoint in (extra_remotes or {}).items():
        registry.register(
            ExtractorDescriptor(
                id=extractor_id,
                display_name=f"Remote: {extractor_id}",
                kind="remote",
                ready=True,
                detail=endpoint,
            ),
            _RemoteExtractor(extractor_id, endpoint, remote_timeout),
        )
    return registry
