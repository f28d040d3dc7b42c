"""RESTful analysis service.

Endpoints: GET /health, GET /extractors, GET /models, POST /analyze. The
analyze body is either JSON ({"text", "extractor_id", "include_non_rel",
"max_token_distance"}) or multipart with a `file` part plus a JSON `options`
part. Responses are produced by the shared canonical serializer so bodies
are byte-stable; every non-200 carries {"error": {"code", "message"}} with
a stable code from the documented set.

Requests are handled against an immutable Runtime snapshot, so arbitrary
request concurrency is safe.
"""

from __future__ import annotations

import json
import os

from fastapi import FastAPI, Request, Response
from starlette.staticfiles import StaticFiles

from cner.config import ServiceConfig
from cner.ingest import IngestError, ingest_file
from cner.ner.registry import UnknownExtractorError
from cner.ner.remote import ProtocolError, RemoteUnavailableError
from cner.pipeline import (
    ExtractorNotReadyError,
    Runtime,
    analyze,
    build_runtime,
    extractors_payload,
    health_payload,
    model_metadata_payload,
    result_to_json,
    to_json,
)


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=to_json(payload),
        status_code=status,
        media_type="application/json",
    )


def _error(status: int, code: str, message: str) -> Response:
    return _json_response({"error": {"code": code, "message": message}}, status)


class _BadRequest(Exception):
    pass


def _parse_options(raw: dict, allow_text: bool) -> dict:
    if not isinstance(raw, dict):
        raise _BadRequest("request body must be a JSON object")
    text = raw.get("text")
    if allow_text:
        if not isinstance(text, str):
            raise _BadRequest("provide exactly one of 'text' (string) or a file upload")
    elif text is not None:
        raise _BadRequest("provide exactly one of 'text' or a file upload, not both")
    extractor_id = raw.get("extractor_id")
    if not isinstance(extractor_id, str) or not extractor_id:
        raise _BadRequest("'extractor_id' must be a non-empty string")
    include_non_rel = raw.get("include_non_rel", False)
    if not isinstance(include_non_rel, bool):
        raise _BadRequest("'include_non_rel' must be a boolean")
    distance = raw.get("max_token_distance")
    if distance is not None and (
        not isinstance(distance, int) or isinstance(distance, bool) or distance < 1
    ):
        raise _BadRequest("'max_token_distance' must be a positive integer")
    return {
        "text": text,
        "extractor_id": extractor_id,
        "include_non_rel": include_non_rel,
        "max_token_distance": distance,
    }


def create_app(runtime: Runtime) -> FastAPI:
    app = FastAPI(title="cner", docs_url=None, redoc_url=None)
    config = runtime.config

    @app.get("/health")
    def health() -> Response:
        return _json_response(health_payload(runtime))

    @app.get("/extractors")
    def extractors() -> Response:
        return _json_response(extractors_payload(runtime))

    @app.get("/models")
    def models() -> Response:
        return _json_response(model_metadata_payload(runtime))

    @app.post("/analyze")
    async def analyze_endpoint(request: Request) -> Response:
        body = await request.body()
        if len(body) > config.max_upload_bytes:
            return _error(
                413,
                "PayloadTooLarge",
                f"request of {len(body)} bytes exceeds the "
                f"{config.max_upload_bytes} byte limit",
            )
        content_type = request.headers.get("content-type", "")
        try:
            if content_type.startswith("multipart/form-data"):
                fields = await _read_multipart(request)
            else:
                try:
                    payload = json.loads(body)
                except ValueError:
                    raise _BadRequest("request body is not valid JSON")
                fields = _parse_options(payload, allow_text=True)
                fields["source"] = "manual input"
        except _BadRequest as exc:
            return _error(400, "MalformedRequest", str(exc))
        except IngestError as exc:
            return _error(exc.status, exc.code, str(exc))

        try:
            result = analyze(
                runtime,
                text=fields["text"],
                extractor_id=fields["extractor_id"],
                include_non_rel=fields["include_non_rel"],
                max_token_distance=fields["max_token_distance"],
                source=fields["source"],
                extra_warnings=fields.get("warnings", ()),
            )
        except UnknownExtractorError as exc:
            return _error(404, "UnknownExtractor", f"unknown extractor {exc.args[0]!r}")
        except ExtractorNotReadyError as exc:
            return _error(409, "ExtractorNotReady", str(exc))
        except (RemoteUnavailableError, ProtocolError) as exc:
            return _error(502, "RemoteUnavailable", str(exc))
        return Response(content=result_to_json(result), media_type="application/json")

    async def _read_multipart(request: Request) -> dict:
        try:
            form = await request.form()
        except Exception:
            raise _BadRequest("malformed multipart body")
        upload = form.get("file")
        if upload is None or isinstance(upload, str):
            raise _BadRequest("multipart requests need a 'file' part")
        options_part = form.get("options")
        if options_part is None:
            options_raw = "{}"
        elif isinstance(options_part, str):
            options_raw = options_part
        else:
            options_raw = (await options_part.read()).decode("utf-8", errors="replace")
        try:
            options = json.loads(options_raw)
        except ValueError:
            raise _BadRequest("'options' part is not valid JSON")
        fields = _parse_options(options, allow_text=False)
        filename = upload.filename or "upload"
        data = await upload.read()
        text, warnings = ingest_file(
            filename, data, config.max_upload_bytes, config.doc_converter
        )
        fields["text"] = text
        fields["source"] = filename
        fields["warnings"] = warnings
        return fields

    if config.static_dir and os.path.isdir(config.static_dir):
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")
    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    return create_app(build_runtime(config))
