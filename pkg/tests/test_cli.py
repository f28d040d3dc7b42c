from __future__ import annotations

import json
import re
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

from cner.cli import main

GOLDEN = Path(__file__).parent / "fixtures" / "golden_analyze.json"

RE_VERBS = {
    "GPE-AFF": "reside",
    "PHYS": "golpea",
    "DISC": "menciona",
    "EMP-ORG": "dirige",
    "ART": "fabrica",
}
RE_NAMES = ["Juan", "María", "Pedro", "Lucía"]
RE_CITIES = ["Cali", "Bogotá", "Pasto", "Neiva"]


def write_re_corpus_file(path: Path, per_class: int = 4) -> int:
    """Separable relation corpus: the between-verb identifies the label;
    records without a listed relation contribute NON-REL negatives."""

    lines = []
    for label, verb in RE_VERBS.items():
        for i in range(per_class):
            name, city = RE_NAMES[i % 4], RE_CITIES[i % 4]
            text = f"{name} {verb} en {city}."
            lines.append(
                {
                    "text": text,
                    "mentions": [
                        {"start": 0, "end": len(name), "type": "PER"},
                        {
                            "start": text.index(city),
                            "end": text.index(city) + len(city),
                            "type": "GPE",
                        },
                    ],
                    "relations": [{"arg1": 0, "arg2": 1, "label": label}],
                }
            )
    for i in range(per_class):
        name, city = RE_NAMES[i % 4], RE_CITIES[(i + 1) % 4]
        text = f"{name} ronca junto a {city}."
        lines.append(
            {
                "text": text,
                "mentions": [
                    {"start": 0, "end": len(name), "type": "PER"},
                    {
                        "start": text.index(city),
                        "end": text.index(city) + len(city),
                        "type": "GPE",
                    },
                ],
                "relations": [],
            }
        )
    path.write_text(
        "\n".join(json.dumps(line, ensure_ascii=False) for line in lines) + "\n",
        encoding="utf-8",
    )
    return len(lines)


NER_CORPUS = """Juan\tB-PER
vive\tO
en\tO
Cali\tB-GPE
.\tO
"""


@pytest.fixture()
def config_file(tmp_path, fixture_gazetteer_path, fixture_relex_path) -> str:
    path = tmp_path / "cner.conf"
    path.write_text(
        f"gazetteer = {fixture_gazetteer_path}\nrelex_model = {fixture_relex_path}\n",
        encoding="utf-8",
    )
    return str(path)


def invoke(*args, **kwargs):
    return CliRunner().invoke(main, list(args), **kwargs)


class TestAnalyze:
    def test_json_matches_service_golden(self, config_file):
        result = invoke("--config", config_file, "analyze", "Juan vive en Cali.")
        assert result.exit_code == 0, result.stderr
        timing_re = re.compile(rb'"timing":\{"segment_ms":\d+,"ner_ms":\d+,"relex_ms":\d+\}')
        normalized = timing_re.sub(
            b'"timing":{"segment_ms":0,"ner_ms":0,"relex_ms":0}',
            result.stdout.rstrip("\n").encode("utf-8"),
        )
        assert normalized == GOLDEN.read_bytes()

    def test_empty_stdin(self, config_file):
        result = invoke("--config", config_file, "analyze", input="")
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["document"]["sentences"] == []

    def test_tsv_single_relation_line(self, config_file):
        result = invoke(
            "--config", config_file, "analyze", "--format", "tsv", "Juan vive en Cali."
        )
        assert result.exit_code == 0
        lines = [l for l in result.stdout.splitlines() if l]
        assert len(lines) == 1
        fields = lines[0].split("\t")
        assert fields == ["0", "Juan", "PER", "Cali", "GPE", "GPE-AFF", "1.000000"]

    def test_unknown_extractor_exit_4(self, config_file):
        result = invoke(
            "--config", config_file, "analyze", "--extractor", "nope", "hola"
        )
        assert result.exit_code == 4

    def test_text_and_file_conflict_exit_2(self, config_file, tmp_path):
        f = tmp_path / "a.txt"
        f.write_text("hola", encoding="utf-8")
        result = invoke(
            "--config", config_file, "analyze", "hola", "--file", str(f)
        )
        assert result.exit_code == 2

    def test_file_input(self, config_file, tmp_path):
        f = tmp_path / "nota.txt"
        f.write_text("Juan vive en Cali.", encoding="utf-8")
        result = invoke("--config", config_file, "analyze", "--file", str(f))
        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["document"]["source"] == "nota.txt"
        assert [m["entity_type"] for m in payload["mentions"]] == ["PER", "GPE"]


class TestTrainNer:
    def test_train_and_reproduce_gold(self, tmp_path, config_file):
        corpus = tmp_path / "ner.tsv"
        corpus.write_text(NER_CORPUS, encoding="utf-8")
        out = tmp_path / "tagger.model"
        result = invoke("train-ner", str(corpus), "--epochs", "5", "--seed", "1",
                        "--out", str(out))
        assert result.exit_code == 0, result.stderr
        assert "training token accuracy: 1.000" in result.stdout

        # analyzing with the learned extractor reproduces the gold mentions
        config = tmp_path / "with_tagger.conf"
        config.write_text(f"tagger_model = {out}\n", encoding="utf-8")
        analysis = invoke("--config", str(config), "analyze",
                          "--extractor", "learned-tagger", "Juan vive en Cali.")
        assert analysis.exit_code == 0
        payload = json.loads(analysis.stdout)
        assert [(m["entity_type"], m["token_range"]) for m in payload["mentions"]] == [
            ("PER", [0, 0]),
            ("GPE", [3, 3]),
        ]

    def test_malformed_line_exit_2(self, tmp_path):
        corpus = tmp_path / "bad.tsv"
        corpus.write_text("Juan\tB-PER\tI-ORG\n", encoding="utf-8")
        result = invoke("train-ner", str(corpus), "--out", str(tmp_path / "m"))
        assert result.exit_code == 2
        assert ":1:" in result.stderr

    def test_empty_corpus_exit_5(self, tmp_path):
        corpus = tmp_path / "empty.tsv"
        corpus.write_text("# nothing here\n\n", encoding="utf-8")
        result = invoke("train-ner", str(corpus), "--out", str(tmp_path / "m"))
        assert result.exit_code == 5

    def test_byte_identical_runs(self, tmp_path):
        corpus = tmp_path / "ner.tsv"
        corpus.write_text(NER_CORPUS, encoding="utf-8")
        out1, out2 = tmp_path / "m1", tmp_path / "m2"
        assert invoke("train-ner", str(corpus), "--seed", "3", "--out", str(out1)).exit_code == 0
        assert invoke("train-ner", str(corpus), "--seed", "3", "--out", str(out2)).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestTrainRe:
    def test_separable_accuracy_one(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        out = tmp_path / "relex.model"
        result = invoke("train-re", str(corpus), "--seed", "7", "--out", str(out))
        assert result.exit_code == 0, result.stderr
        assert "training accuracy: 1.000" in result.stdout

    def test_misaligned_mention_exit_2(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        corpus.write_text(
            json.dumps(
                {
                    "text": "Juan vive en Cali.",
                    "mentions": [
                        {"start": 0, "end": 2, "type": "PER"},
                        {"start": 13, "end": 17, "type": "GPE"},
                    ],
                    "relations": [],
                }
            )
            + "\n",
            encoding="utf-8",
        )
        result = invoke("train-re", str(corpus), "--out", str(tmp_path / "m"))
        assert result.exit_code == 2
        assert "align" in result.stderr

    def test_empty_corpus_exit_5(self, tmp_path):
        corpus = tmp_path / "empty.jsonl"
        corpus.write_text("\n", encoding="utf-8")
        result = invoke("train-re", str(corpus), "--out", str(tmp_path / "m"))
        assert result.exit_code == 5

    def test_byte_identical_runs(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        out1, out2 = tmp_path / "m1", tmp_path / "m2"
        for out in (out1, out2):
            assert invoke("train-re", str(corpus), "--epochs", "20", "--seed", "5",
                          "--out", str(out)).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestEvaluate:
    def test_re_self_evaluation_perfect(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        model = tmp_path / "relex.model"
        assert invoke("train-re", str(corpus), "--seed", "7", "--out", str(model)).exit_code == 0
        result = invoke("evaluate", str(model), str(corpus), "--task", "re")
        assert result.exit_code == 0, result.stderr
        micro_line = [l for l in result.stdout.splitlines() if l.startswith("micro")][0]
        assert micro_line.split() == ["micro", "1.000", "1.000", "1.000"]

    def test_re_json_form(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        model = tmp_path / "relex.model"
        invoke("train-re", str(corpus), "--seed", "7", "--out", str(model))
        result = invoke("evaluate", str(model), str(corpus), "--task", "re", "--json")
        body = json.loads(result.stdout)
        assert body["task"] == "re"
        assert body["micro"]["f1"] == 1.0
        assert len(body["confusion"]) == 6

    def test_ner_self_evaluation(self, tmp_path):
        corpus = tmp_path / "ner.tsv"
        corpus.write_text(NER_CORPUS, encoding="utf-8")
        model = tmp_path / "tagger.model"
        invoke("train-ner", str(corpus), "--epochs", "5", "--seed", "1", "--out", str(model))
        result = invoke("evaluate", str(model), str(corpus), "--task", "ner")
        assert result.exit_code == 0
        assert "token accuracy  1.000" in result.stdout

    def test_empty_corpus_exit_2(self, tmp_path, fixture_relex_path):
        corpus = tmp_path / "empty.jsonl"
        corpus.write_text("\n", encoding="utf-8")
        result = invoke("evaluate", fixture_relex_path, str(corpus), "--task", "re")
        assert result.exit_code == 2
        assert "empty corpus" in result.stderr

    def test_model_load_failure_exit_2(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        bad_model = tmp_path / "bad.model"
        bad_model.write_text("garbage\n", encoding="utf-8")
        result = invoke("evaluate", str(bad_model), str(corpus), "--task", "re")
        assert result.exit_code == 2

    def test_report_dir_writes_tsv_and_figures(self, tmp_path):
        corpus = tmp_path / "re.jsonl"
        write_re_corpus_file(corpus)
        model = tmp_path / "relex.model"
        invoke("train-re", str(corpus), "--seed", "7", "--out", str(model))
        report_dir = tmp_path / "report"
        result = invoke("evaluate", str(model), str(corpus), "--task", "re",
                        "--report-dir", str(report_dir))
        assert result.exit_code == 0
        tsv = (report_dir / "metrics.tsv").read_text(encoding="utf-8")
        assert tsv.splitlines()[0] == "label\tprecision\trecall\tf1\ttp\tfp\tfn"
        assert (report_dir / "per_label_f1.png").stat().st_size > 0
        assert (report_dir / "confusion_matrix.png").stat().st_size > 0


def free_port() -> int:
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


class TestServe:
    def test_missing_config_exit_2(self):
        result = invoke("--config", "/no/such/file.conf", "serve")
        assert result.exit_code == 2
        assert "/no/such/file.conf" in result.stderr

    def test_occupied_port_exit_3(self, tmp_path):
        blocker = socket.socket()
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        config = tmp_path / "cner.conf"
        config.write_text(f"port = {port}\n", encoding="utf-8")
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "cner", "--config", str(config), "serve"],
                capture_output=True,
                timeout=30,
            )
        finally:
            blocker.close()
        assert proc.returncode == 3

    def test_serves_health(self, tmp_path, fixture_gazetteer_path):
        import requests

        port = free_port()
        config = tmp_path / "cner.conf"
        config.write_text(
            f"port = {port}\ngazetteer = {fixture_gazetteer_path}\n", encoding="utf-8"
        )
        proc = subprocess.Popen(
            [sys.executable, "-m", "cner", "--config", str(config), "serve"],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        try:
            deadline = time.time() + 15
            body = None
            while time.time() < deadline:
                try:
                    body = requests.get(f"http://127.0.0.1:{port}/health", timeout=1).json()
                    break
                except requests.ConnectionError:
                    time.sleep(0.2)
            assert body is not None, "service never came up"
            assert body["status"] == "ok"
            assert body["extractors_ready"] >= 1
        finally:
            proc.terminate()
            proc.wait(timeout=10)
