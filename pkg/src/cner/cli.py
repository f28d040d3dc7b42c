"""Command-line interface: serve, analyze, train both models, evaluate.

Exit codes are part of the contract: 2 bad arguments/config/corpus, 3 bind
failure, 4 unknown extractor, 5 empty training corpus. Diagnostics go to
stderr; data (payloads, reports, metrics) goes to stdout.
"""

from __future__ import annotations

import os
import socket
import sys

import click

from cner.config import ConfigError, load_config
from cner.corpus import (
    ParseError,
    ValidationError,
    build_re_instances,
    parse_ner_corpus,
    parse_re_corpus,
)
from cner.ingest import IngestError, ingest_file
from cner.modelio import ModelFormatError
from cner.ner.evaluation import evaluate_tagger
from cner.ner.perceptron import (
    load_tagger,
    save_tagger,
    tagging_accuracy,
    train_tagger,
)
from cner.ner.registry import RULE_EXTRACTOR_ID, UnknownExtractorError
from cner.ner.remote import ProtocolError, RemoteUnavailableError
from cner.pipeline import (
    ExtractorNotReadyError,
    analyze,
    build_runtime,
    result_to_json,
)
from cner.relex.metrics import evaluate_relex
from cner.relex.model import load_relex, save_relex, train_relex, training_accuracy
from cner.relex.types import LABEL_INDEX
from cner.report import (
    format_ner_report,
    format_relex_report,
    ner_report_json,
    relex_report_json,
    write_ner_report_files,
    write_relex_report_files,
)
from cner.textcore import default_abbreviations, load_abbreviations

EXIT_BAD_INPUT = 2
EXIT_BIND_FAILURE = 3
EXIT_UNKNOWN_EXTRACTOR = 4
EXIT_EMPTY_CORPUS = 5

DEFAULT_SEED = 42


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.option("--config", "config_path", default=None, metavar="PATH",
              help="Configuration file (key = value lines).")
@click.option("--seed", type=int, default=None,
              help="Default RNG seed for the training commands.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, seed: int | None) -> None:
    """Spanish NER and relation extraction toolkit."""

    ctx.obj = {"config_path": config_path, "seed": seed}


def _load_config(ctx: click.Context):
    try:
        return load_config(ctx.obj["config_path"])
    except ConfigError as exc:
        _fail(EXIT_BAD_INPUT, str(exc))


def _resolve_seed(ctx: click.Context, seed: int | None) -> int:
    if seed is not None:
        return seed
    if ctx.obj["seed"] is not None:
        return ctx.obj["seed"]
    return DEFAULT_SEED


@main.command()
@click.pass_context
def serve(ctx: click.Context) -> None:
    """Run the REST analysis service until terminated."""

    import uvicorn

    from cner.service import create_app

    config = _load_config(ctx)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        probe.close()
        _fail(EXIT_BIND_FAILURE, f"cannot bind {config.host}:{config.port}: {exc}")
    probe.close()

    runtime = build_runtime(config)
    for warning in runtime.load_warnings:
        click.echo(f"warning: {warning}", err=True)
    app = create_app(runtime)
    click.echo(f"serving on http://{config.host}:{config.port}")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


@main.command("analyze")
@click.argument("text", required=False)
@click.option("--file", "file_path", default=None, metavar="PATH",
              help="Analyze a .txt/.odt/.doc file instead of literal text.")
@click.option("--extractor", "extractor_id", default=RULE_EXTRACTOR_ID,
              show_default=True, help="Extractor id from the registry.")
@click.option("--format", "output_format", type=click.Choice(["json", "tsv"]),
              default="json", show_default=True)
@click.option("--include-non-rel", is_flag=True,
              help="Keep NON-REL instances in the output.")
@click.option("--max-token-distance", type=click.IntRange(min=1), default=None)
@click.pass_context
def analyze_cmd(
    ctx: click.Context,
    text: str | None,
    file_path: str | None,
    extractor_id: str,
    output_format: str,
    include_non_rel: bool,
    max_token_distance: int | None,
) -> None:
    """Annotate TEXT (or --file, or stdin) and print the result."""

    if text is not None and file_path is not None:
        _fail(EXIT_BAD_INPUT, "provide TEXT or --file, not both")
    config = _load_config(ctx)
    runtime = build_runtime(config)
    source = "manual input"
    extra_warnings: list[str] = []
    if file_path is not None:
        try:
            with open(file_path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            _fail(EXIT_BAD_INPUT, f"cannot read {file_path}: {exc}")
        try:
            text, extra_warnings = ingest_file(
                os.path.basename(file_path), data, config.max_upload_bytes,
                config.doc_converter,
            )
        except IngestError as exc:
            _fail(EXIT_BAD_INPUT, str(exc))
        source = os.path.basename(file_path)
    elif text is None:
        text = sys.stdin.read()

    try:
        result = analyze(
            runtime,
            text=text,
            extractor_id=extractor_id,
            include_non_rel=include_non_rel,
            max_token_distance=max_token_distance,
            source=source,
            extra_warnings=extra_warnings,
        )
    except UnknownExtractorError:
        _fail(EXIT_UNKNOWN_EXTRACTOR, f"unknown extractor {extractor_id!r}")
    except ExtractorNotReadyError as exc:
        _fail(1, str(exc))
    except (RemoteUnavailableError, ProtocolError) as exc:
        _fail(1, str(exc))

    if output_format == "json":
        click.echo(result_to_json(result))
        return
    text_value = result.document.text
    mention_at = {m.identity(): m for m in result.mentions}
    for relation in result.relations:
        arg1 = mention_at[relation.pair.arg1.identity()]
        arg2 = mention_at[relation.pair.arg2.identity()]
        score = relation.scores[LABEL_INDEX[relation.label]]
        click.echo(
            "\t".join(
                [
                    str(relation.pair.sentence_index),
                    arg1.span.slice(text_value),
                    arg1.entity_type,
                    arg2.span.slice(text_value),
                    arg2.entity_type,
                    relation.label,
                    f"{score:.6f}",
                ]
            )
        )


@main.command("train-ner")
@click.argument("corpus_path", metavar="CORPUS")
@click.option("--epochs", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--seed", type=int, default=None, help="Overrides the global --seed.")
@click.option("--out", "out_path", required=True, metavar="PATH")
@click.pass_context
def train_ner_cmd(
    ctx: click.Context, corpus_path: str, epochs: int, seed: int | None, out_path: str
) -> None:
    """Train the sequence tagger on a token<TAB>tag corpus."""

    try:
        corpus = parse_ner_corpus(corpus_path)
    except (ParseError, ValidationError) as exc:
        _fail(EXIT_BAD_INPUT, str(exc))
    except OSError as exc:
        _fail(EXIT_BAD_INPUT, f"cannot read {corpus_path}: {exc}")
    if len(corpus) == 0:
        _fail(EXIT_EMPTY_CORPUS, "empty corpus")
    pairs = corpus.training_pairs()
    model = train_tagger(pairs, epochs=epochs, seed=_resolve_seed(ctx, seed))
    save_tagger(model, out_path)
    click.echo(f"training token accuracy: {tagging_accuracy(model, pairs):.3f}")


@main.command("train-re")
@click.argument("corpus_path", metavar="CORPUS")
@click.option("--lambda", "lambda_", type=click.FloatRange(min=0, min_open=True),
              default=0.01, show_default=True,
              help="L2 regularization strength.")
@click.option("--epochs", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--seed", type=int, default=None, help="Overrides the global --seed.")
@click.option("--max-token-distance", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--out", "out_path", required=True, metavar="PATH")
@click.pass_context
def train_re_cmd(
    ctx: click.Context,
    corpus_path: str,
    lambda_: float,
    epochs: int,
    seed: int | None,
    max_token_distance: int,
    out_path: str,
) -> None:
    """Train the relation classifier on a JSON-lines corpus."""

    config = _load_config(ctx)
    abbreviations = (
        load_abbreviations(config.abbreviations)
        if config.abbreviations
        else default_abbreviations()
    )
    try:
        corpus = parse_re_corpus(corpus_path, abbreviations=abbreviations)
    except (ParseError, ValidationError) as exc:
        _fail(EXIT_BAD_INPUT, str(exc))
    except OSError as exc:
        _fail(EXIT_BAD_INPUT, f"cannot read {corpus_path}: {exc}")
    instances = build_re_instances(corpus, max_token_distance=max_token_distance)
    if not instances:
        _fail(EXIT_EMPTY_CORPUS, "empty corpus")
    model = train_relex(
        instances, lambda_=lambda_, epochs=epochs, seed=_resolve_seed(ctx, seed)
    )
    save_relex(model, out_path)
    click.echo(f"training accuracy: {training_accuracy(model, instances):.3f}")


@main.command()
@click.argument("model_path", metavar="MODEL")
@click.argument("corpus_path", metavar="CORPUS")
@click.option("--task", type=click.Choice(["ner", "re"]), required=True)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--report-dir", default=None, metavar="DIR",
              help="Also write metrics.tsv and figure files to DIR.")
@click.option("--max-token-distance", type=click.IntRange(min=1), default=50, show_default=True)
@click.pass_context
def evaluate(
    ctx: click.Context,
    model_path: str,
    corpus_path: str,
    task: str,
    as_json: bool,
    report_dir: str | None,
    max_token_distance: int,
) -> None:
    """Score a trained model against a gold corpus."""

    import json as json_module

    try:
        if task == "ner":
            model = load_tagger(model_path)
            corpus = parse_ner_corpus(corpus_path)
            if len(corpus) == 0:
                _fail(EXIT_BAD_INPUT, "empty corpus")
            metrics = evaluate_tagger(model, corpus.training_pairs())
            report = format_ner_report(metrics)
            machine = ner_report_json(metrics)
            files = (
                write_ner_report_files(metrics, report_dir) if report_dir else []
            )
        else:
            model = load_relex(model_path)
            rel_corpus = parse_re_corpus(corpus_path)
            instances = build_re_instances(rel_corpus, max_token_distance=max_token_distance)
            if not instances:
                _fail(EXIT_BAD_INPUT, "empty corpus")
            metrics = evaluate_relex(model, instances)
            report = format_relex_report(metrics)
            machine = relex_report_json(metrics)
            files = (
                write_relex_report_files(metrics, report_dir) if report_dir else []
            )
    except (ParseError, ValidationError, ModelFormatError) as exc:
        _fail(EXIT_BAD_INPUT, str(exc))
    except OSError as exc:
        _fail(EXIT_BAD_INPUT, str(exc))

    click.echo(json_module.dumps(machine, ensure_ascii=False) if as_json else report)
    for path in files:
        click.echo(f"wrote {path}", err=True)


if __name__ == "__main__":
    main()
