"""Shared test utilities: seeded corpus generators and a stub remote service."""

from __future__ import annotations

import json
import random
import threading
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from cner.textcore import Sentence, sentence_from_tokens

# Word pools for Spanish-like random text: accented vocabulary,
# protected abbreviations, decimals and wrapped punctuation.
LOWER_WORDS = [
    "casa", "café", "niño", "río", "montaña", "según", "rápido", "vive",
    "en", "de", "la", "el", "y", "con", "exportó", "pequeño", "año",
    "corazón", "música", "árbol", "fútbol", "compró", "vendió", "lingüística",
]
PROPER_WORDS = ["Juan", "María", "Cali", "Bogotá", "Pérez", "Álvaro", "Núñez", "Medellín"]
ABBREVIATIONS = ["Sr.", "Sra.", "Dr.", "Dra.", "Prof.", "etc.", "EE.UU.", "pág.", "núm."]
DECIMALS = ["3,5", "3.50", "10,25", "1.200", "0,5"]
TERMINATORS = [".", "!", "?", "…"]

PERSONS = [
    "Juan", "María", "Pedro", "Lucía", "Álvaro", "Camila", "Andrés",
    "Sofía", "Diego", "Valentina", "Raúl", "Elena",
]
CITIES = ["Cali", "Bogotá", "Medellín", "Cartagena", "Pasto", "Cúcuta", "Ibagué", "Neiva"]
ORGS = [
    ["Universidad", "del", "Valle"],
    ["Banco", "Nacional"],
    ["Grupo", "Andino"],
    ["Instituto", "Caro"],
    ["Emcali"],
    ["Ecopetrol"],
]


def spanish_like_text(rng: random.Random) -> str:
    """One random multi-sentence text exercising the segmentation rules."""

    paragraphs = []
    for _ in range(rng.randint(1, 3)):
        sentences = []
        for _ in range(rng.randint(1, 4)):
            words = []
            if rng.random() < 0.3:
                words.append(rng.choice(["¿", "¡"]))
            for _ in range(rng.randint(1, 8)):
                bucket = rng.random()
                if bucket < 0.55:
                    words.append(rng.choice(LOWER_WORDS))
                elif bucket < 0.75:
                    words.append(rng.choice(PROPER_WORDS))
                elif bucket < 0.88:
                    words.append(rng.choice(ABBREVIATIONS))
                else:
                    words.append(rng.choice(DECIMALS))
            sentence = " ".join(words) + rng.choice(TERMINATORS)
            sentences.append(sentence)
        paragraphs.append(" ".join(sentences))
    return "\n\n".join(paragraphs)


def gazetteer_training_corpus(
    rng: random.Random, n_sentences: int
) -> list[tuple[Sentence, list[str]]]:
    """Synthetic tagged sentences built by slotting gazetteer names into
    templates; the slot positions define the gold BIO tags."""

    templates = [
        (["{PER}", "vive", "en", "{GPE}", "."], None),
        (["{PER}", "trabaja", "para", "{ORG}", "."], None),
        (["La", "sede", "de", "{ORG}", "está", "en", "{GPE}", "."], None),
        (["{PER}", "y", "{PER}", "viajaron", "a", "{GPE}", "."], None),
        (["{GPE}", "queda", "cerca", "de", "{GPE}", "."], None),
        (["El", "informe", "menciona", "a", "{PER}", "."], None),
    ]
    corpus = []
    for _ in range(n_sentences):
        template, _ = templates[rng.randrange(len(templates))]
        tokens: list[str] = []
        tags: list[str] = []
        for slot in template:
            if slot == "{PER}":
                tokens.append(rng.choice(PERSONS))
                tags.append("B-PER")
            elif slot == "{GPE}":
                tokens.append(rng.choice(CITIES))
                tags.append("B-GPE")
            elif slot == "{ORG}":
                org = rng.choice(ORGS)
                tokens.extend(org)
                tags.extend(["B-ORG"] + ["I-ORG"] * (len(org) - 1))
            else:
                tokens.append(slot)
                tags.append("O")
        corpus.append((sentence_from_tokens(tokens), tags))
    return corpus


def separable_relex_instances(
    rng: random.Random, per_class: int = 20
) -> list[tuple[set[str], str]]:
    """Six-class corpus separable by per-class signature features."""

    from cner.relex.types import RELATION_LABELS

    instances = []
    for k, label in enumerate(RELATION_LABELS):
        for _ in range(per_class):
            features = {
                f"sig={k}",
                f"noise={rng.randrange(12)}",
                f"noise={rng.randrange(12)}",
            }
            instances.append((features, label))
    return instances


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):  # noqa: N802 (http.server API)
        length = int(self.headers.get("Content-Length", "0"))
        request_body = json.loads(self.rfile.read(length) or b"{}")
        status, body = self.server.responder(request_body)  # type: ignore[attr-defined]
        payload = body if isinstance(body, (bytes, str)) else json.dumps(body)
        if isinstance(payload, str):
            payload = payload.encode("utf-8")
        try:
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        except (BrokenPipeError, ConnectionResetError):
            pass  # client gave up (timeout tests)

    def log_message(self, *args):  # silence test output
        pass


@contextmanager
def stub_remote(responder):
    """Serve `responder(request_json) -> (status, body)` on an OS-chosen port."""

    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    server.responder = responder  # type: ignore[attr-defined]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}/ner"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
