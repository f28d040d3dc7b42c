"""Evaluation reports: aligned text tables, JSON forms, TSV + figure files.

The file-based report (metrics.tsv plus PNG charts) lives next to whatever
directory the caller names; figures use the Agg backend so report
generation works headless.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from cner.ner.evaluation import NerMetrics
from cner.ner.types import ENTITY_TYPES
from cner.relex.metrics import Metrics
from cner.relex.types import RELATION_LABELS


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    )


def format_relex_report(metrics: Metrics) -> str:
    rows = [["label", "precision", "recall", "f1", "tp", "fp", "fn"]]
    for label in RELATION_LABELS:
        s = metrics.per_label[label]
        rows.append(
            [label, f"{s.precision:.3f}", f"{s.recall:.3f}", f"{s.f1:.3f}",
             str(s.tp), str(s.fp), str(s.fn)]
        )
    rows.append(
        ["micro", f"{metrics.micro_precision:.3f}", f"{metrics.micro_recall:.3f}",
         f"{metrics.micro_f1:.3f}", "", "", ""]
    )
    rows.append(["macro-f1", "", "", f"{metrics.macro_f1:.3f}", "", "", ""])
    lines = [_table(rows), "", "confusion (rows gold, columns predicted)"]
    confusion_rows = [["", *RELATION_LABELS]]
    for label, row in zip(RELATION_LABELS, metrics.confusion):
        confusion_rows.append([label, *[str(c) for c in row]])
    lines.append(_table(confusion_rows))
    if metrics.micro_undefined:
        lines.append(
            "note: no substantive labels in gold or predictions; "
            "micro scores are 0/0 and reported as 0.0"
        )
    return "\n".join(lines)


def relex_report_json(metrics: Metrics) -> dict:
    return {
        "task": "re",
        "per_label": {
            label: {
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
                "tp": s.tp,
                "fp": s.fp,
                "fn": s.fn,
            }
            for label, s in metrics.per_label.items()
        },
        "micro": {
            "precision": metrics.micro_precision,
            "recall": metrics.micro_recall,
            "f1": metrics.micro_f1,
        },
        "macro_f1": metrics.macro_f1,
        "confusion": [list(row) for row in metrics.confusion],
        "micro_undefined": metrics.micro_undefined,
    }


def format_ner_report(metrics: NerMetrics) -> str:
    rows = [["type", "precision", "recall", "f1", "tp", "fp", "fn"]]
    for entity_type in ENTITY_TYPES:
        s = metrics.per_type[entity_type]
        rows.append(
            [entity_type, f"{s.precision:.3f}", f"{s.recall:.3f}", f"{s.f1:.3f}",
             str(s.tp), str(s.fp), str(s.fn)]
        )
    s = metrics.micro
    rows.append(
        ["micro", f"{s.precision:.3f}", f"{s.recall:.3f}", f"{s.f1:.3f}",
         str(s.tp), str(s.fp), str(s.fn)]
    )
    return "\n".join(
        [_table(rows), f"token accuracy  {metrics.token_accuracy:.3f}"]
    )


def ner_report_json(metrics: NerMetrics) -> dict:
    return {
        "task": "ner",
        "per_type": {
            entity_type: {
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
                "tp": s.tp,
                "fp": s.fp,
                "fn": s.fn,
            }
            for entity_type, s in metrics.per_type.items()
        },
        "micro": {
            "precision": metrics.micro.precision,
            "recall": metrics.micro.recall,
            "f1": metrics.micro.f1,
        },
        "token_accuracy": metrics.token_accuracy,
    }


def _write_tsv(path: str, names: list[str], scores: list) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("label\tprecision\trecall\tf1\ttp\tfp\tfn\n")
        for name, s in zip(names, scores):
            fh.write(
                f"{name}\t{s.precision:.6f}\t{s.recall:.6f}\t{s.f1:.6f}"
                f"\t{s.tp}\t{s.fp}\t{s.fn}\n"
            )


def _f1_bars(path: str, names: list[str], values: list[float], title: str) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.bar(range(len(names)), values, color="#4878d0")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("F1")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_relex_report_files(metrics: Metrics, out_dir: str) -> list[str]:
    """metrics.tsv, a per-label F1 chart and a confusion heatmap."""

    os.makedirs(out_dir, exist_ok=True)
    written = []
    tsv_path = os.path.join(out_dir, "metrics.tsv")
    _write_tsv(tsv_path, list(RELATION_LABELS), [metrics.per_label[l] for l in RELATION_LABELS])
    written.append(tsv_path)

    f1_path = os.path.join(out_dir, "per_label_f1.png")
    _f1_bars(
        f1_path,
        list(RELATION_LABELS),
        [metrics.per_label[l].f1 for l in RELATION_LABELS],
        "Per-label F1",
    )
    written.append(f1_path)

    cm_path = os.path.join(out_dir, "confusion_matrix.png")
    fig, ax = plt.subplots(figsize=(5.6, 4.8))
    image = ax.imshow(metrics.confusion, cmap="Blues")
    ax.set_xticks(range(len(RELATION_LABELS)))
    ax.set_yticks(range(len(RELATION_LABELS)))
    ax.set_xticklabels(RELATION_LABELS, rotation=45, ha="right")
    ax.set_yticklabels(RELATION_LABELS)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    for i, row in enumerate(metrics.confusion):
        for j, count in enumerate(row):
            ax.text(j, i, str(count), ha="center", va="center", fontsize=8)
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(cm_path, dpi=120)
    plt.close(fig)
    written.append(cm_path)
    return written


def write_ner_report_files(metrics: NerMetrics, out_dir: str) -> list[str]:
    """metrics.tsv and a per-type F1 chart."""

    os.makedirs(out_dir, exist_ok=True)
    tsv_path = os.path.join(out_dir, "metrics.tsv")
    _write_tsv(tsv_path, list(ENTITY_TYPES), [metrics.per_type[t] for t in ENTITY_TYPES])
    f1_path = os.path.join(out_dir, "per_type_f1.png")
    _f1_bars(
        f1_path,
        list(ENTITY_TYPES),
        [metrics.per_type[t].f1 for t in ENTITY_TYPES],
        "Per-type F1",
    )
    return [tsv_path, f1_path]
