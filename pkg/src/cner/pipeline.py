"""Analysis orchestration shared by the REST service and the CLI.

One code path produces the full annotation payload: segment the text, run
the selected extractor per sentence, classify candidate mention pairs, and
serialize. The serializer here is the single source of the wire format, so
the CLI's JSON output and the service's response body are byte-identical
for the same input (timing fields excepted: they are informational and
excluded from every determinism contract).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from cner import __version__
from cner.config import ServiceConfig
from cner.ner.gazetteer import Gazetteer, load_gazetteer
from cner.ner.perceptron import TaggerModel, load_tagger
from cner.ner.registry import ExtractorRegistry, build_registry
from cner.ner.types import EntityMention
from cner.relex.model import RelexModel, extract_relations, load_relex
from cner.relex.types import NON_REL, RelationInstance
from cner.textcore import Document, default_abbreviations, load_abbreviations, segment

DEFAULT_MAX_TOKEN_DISTANCE = 50


class ExtractorNotReadyError(RuntimeError):
    """The selected extractor exists but is not ready to serve."""


class RelexModelMissingError(RuntimeError):
    """Relation classification requested without a loaded model."""


@dataclass(frozen=True)
class AnalysisResult:
    document: Document
    mentions: tuple[EntityMention, ...]
    relations: tuple[RelationInstance, ...]
    extractor_id: str
    timing: Mapping[str, int]
    warnings: tuple[str, ...]


@dataclass
class Runtime:
    """Immutable snapshot of everything a request needs."""

    config: ServiceConfig
    registry: ExtractorRegistry
    abbreviations: frozenset[str]
    tagger: TaggerModel | None = None
    relex: RelexModel | None = None
    load_warnings: tuple[str, ...] = ()


def build_runtime(config: ServiceConfig) -> Runtime:
    """Load models/resources; missing files degrade to not-ready, not failure."""

    warnings: list[str] = []

    def try_load(path: str | None, loader, what: str):
        if path is None:
            return None, f"no {what} configured"
        try:
            return loader(path), path
        except (OSError, ValueError) as exc:
            warnings.append(f"could not load {what} from {path}: {exc}")
            return None, f"failed to load {path}"

    abbreviations = default_abbreviations()
    if config.abbreviations is not None:
        loaded, _ = try_load(config.abbreviations, load_abbreviations, "abbreviation list")
        if loaded is not None:
            abbreviations = loaded
    gazetteer, gazetteer_detail = try_load(config.gazetteer, load_gazetteer, "gazetteer")
    tagger, tagger_detail = try_load(config.tagger_model, load_tagger, "tagger model")
    relex, _ = try_load(config.relex_model, load_relex, "relation model")
    if config.relex_model is None:
        warnings.append("no relation model configured; relations will be empty")

    registry = build_registry(
        gazetteer=gazetteer if gazetteer is not None else Gazetteer(),
        gazetteer_detail=gazetteer_detail,
        heuristic_caps=config.heuristic_caps,
        tagger=tagger,
        tagger_detail=tagger_detail,
        remote_endpoint=config.remote_endpoint,
        remote_timeout=config.remote_timeout,
        extra_remotes=config.extra_remotes,
    )
    return Runtime(
        config=config,
        registry=registry,
        abbreviations=abbreviations,
        tagger=tagger,
        relex=relex,
        load_warnings=tuple(warnings),
    )


def document_id(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def analyze(
    runtime: Runtime,
    text: str,
    extractor_id: str,
    include_non_rel: bool = False,
    max_token_distance: int | None = None,
    source: str = "manual input",
    extra_warnings: Sequence[str] = (),
) -> AnalysisResult:
    """Run the full pipeline. Raises UnknownExtractorError,
    ExtractorNotReadyError and the remote adapter's errors."""

    entry = runtime.registry.resolve(extractor_id)
    if not entry.descriptor.ready:
        raise ExtractorNotReadyError(
            f"extractor {extractor_id!r} is not ready: {entry.descriptor.detail}"
        )
    distance = max_token_distance if max_token_distance is not None else DEFAULT_MAX_TOKEN_DISTANCE
    warnings = list(extra_warnings)

    t0 = time.perf_counter()
    document = segment(
        text, id=document_id(text), source=source, abbreviations=runtime.abbreviations
    )
    t1 = time.perf_counter()
    mentions: list[EntityMention] = []
    per_sentence: list[list[EntityMention]] = []
    for sentence in document.sentences:
        found, extractor_warnings = entry.extract(sentence)
        warnings.extend(extractor_warnings)
        per_sentence.append(found)
        mentions.extend(found)
    t2 = time.perf_counter()
    relations: list[RelationInstance] = []
    if runtime.relex is None:
        if any(len(found) >= 2 for found in per_sentence):
            warnings.append("no relation model loaded; skipping relation extraction")
    else:
        for sentence, found in zip(document.sentences, per_sentence):
            relations.extend(
                extract_relations(sentence, found, runtime.relex, distance)
            )
    t3 = time.perf_counter()

    if not include_non_rel:
        relations = [r for r in relations if r.label != NON_REL]
    return AnalysisResult(
        document=document,
        mentions=tuple(mentions),
        relations=tuple(relations),
        extractor_id=extractor_id,
        timing={
            "segment_ms": int((t1 - t0) * 1000),
            "ner_ms": int((t2 - t1) * 1000),
            "relex_ms": int((t3 - t2) * 1000),
        },
        warnings=tuple(warnings),
    )


def _span_payload(span) -> dict:
    return {"start": span.start, "end": span.end}


def result_to_payload(result: AnalysisResult) -> dict:
    """Wire form of an AnalysisResult: plain dicts in a fixed key order."""

    document = result.document
    mention_index = {m.identity(): i for i, m in enumerate(result.mentions)}
    return {
        "document": {
            "id": document.id,
            "text": document.text,
            "language": document.language,
            "source": document.source,
            "sentences": [
                {
                    "index": s.index,
                    "span": _span_payload(s.span),
                    "tokens": [
                        {
                            "index": t.index,
                            "span": _span_payload(t.span),
                            "surface": t.surface,
                        }
                        for t in s.tokens
                    ],
                }
                for s in document.sentences
            ],
        },
        "mentions": [
            {
                "sentence_index": m.sentence_index,
                "token_range": list(m.token_range),
                "span": _span_payload(m.span),
                "entity_type": m.entity_type,
                "extractor_id": m.extractor_id,
                "confidence": m.confidence,
            }
            for m in result.mentions
        ],
        "relations": [
            {
                "sentence_index": r.pair.sentence_index,
                "arg1": mention_index[r.pair.arg1.identity()],
                "arg2": mention_index[r.pair.arg2.identity()],
                "label": r.label,
                "scores": list(r.scores),
            }
            for r in result.relations
        ],
        "extractor_id": result.extractor_id,
        "timing": {
            "segment_ms": result.timing["segment_ms"],
            "ner_ms": result.timing["ner_ms"],
            "relex_ms": result.timing["relex_ms"],
        },
        "warnings": list(result.warnings),
    }


def to_json(payload: dict) -> str:
    """Canonical JSON: fixed key order, compact separators, raw UTF-8."""

    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def result_to_json(result: AnalysisResult) -> str:
    return to_json(result_to_payload(result))


def model_metadata_payload(runtime: Runtime) -> list[dict]:
    """Metadata of the loaded models; never includes weights."""

    models = []
    if runtime.tagger is not None:
        meta = runtime.tagger.metadata
        models.append(
            {
                "kind": "tagger",
                "format": meta.get("format"),
                "fingerprint": meta.get("corpus"),
                "created": meta.get("created"),
                "seed": meta.get("seed"),
                "epochs": meta.get("epochs"),
            }
        )
    if runtime.relex is not None:
        meta = runtime.relex.metadata
        hp = runtime.relex.hyperparameters
        models.append(
            {
                "kind": "relex",
                "format": meta.get("format"),
                "fingerprint": meta.get("corpus"),
                "created": meta.get("created"),
                "seed": hp.get("seed"),
                "epochs": hp.get("epochs"),
                "lambda": hp.get("lambda"),
            }
        )
    return models


def health_payload(runtime: Runtime) -> dict:
    return {
        "status": "ok",
        "version": __version__,
        "extractors_ready": runtime.registry.ready_count(),
    }


def extractors_payload(runtime: Runtime) -> list[dict]:
    return [
        {
            "id": d.id,
            "display_name": d.display_name,
            "kind": d.kind,
            "ready": d.ready,
            "detail": d.detail,
        }
        for d in runtime.registry.list()
    ]
