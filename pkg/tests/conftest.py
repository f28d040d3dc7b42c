from __future__ import annotations

import io
import zipfile

import numpy as np
import pytest

from cner.config import ServiceConfig
from cner.pipeline import build_runtime
from cner.relex.model import RelexModel, save_relex
from cner.relex.types import RELATION_LABELS


def make_fixture_relex_model() -> RelexModel:
    """Single-weight model: the PER~GPE type-pair feature votes GPE-AFF."""

    weights = np.zeros((len(RELATION_LABELS), 1))
    weights[0, 0] = 1.0
    return RelexModel(
        feature_vocabulary={"tp=PER~GPE": 0},
        weights=weights,
        bias=np.zeros(len(RELATION_LABELS)),
        hyperparameters={"lambda": 0.01, "epochs": 1, "seed": 0},
        metadata={"format": 1, "created": 0, "corpus": "fixture"},
    )


@pytest.fixture(scope="session")
def fixture_gazetteer_path(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("fixtures") / "gazetteer.tsv"
    path.write_text("PER\tJuan\nGPE\tCali\n", encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def fixture_relex_path(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("fixtures") / "relex.model"
    save_relex(make_fixture_relex_model(), str(path))
    return str(path)


@pytest.fixture()
def fixture_config(fixture_gazetteer_path, fixture_relex_path) -> ServiceConfig:
    return ServiceConfig(
        gazetteer=fixture_gazetteer_path,
        relex_model=fixture_relex_path,
    )


@pytest.fixture()
def fixture_runtime(fixture_config):
    return build_runtime(fixture_config)


@pytest.fixture()
def config_for_cli(tmp_path, fixture_gazetteer_path, fixture_relex_path) -> str:
    path = tmp_path / "cner.conf"
    path.write_text(
        f"gazetteer = {fixture_gazetteer_path}\nrelex_model = {fixture_relex_path}\n",
        encoding="utf-8",
    )
    return str(path)


def make_odt(paragraphs: list[str]) -> bytes:
    """Minimal OpenDocument text archive with the given paragraphs."""

    content = (
        '<?xml version="1.0" encoding="UTF-8"?>'
        '<office:document-content '
        'xmlns:office="urn:oasis:names:tc:opendocument:xmlns:office:1.0" '
        'xmlns:text="urn:oasis:names:tc:opendocument:xmlns:text:1.0">'
        "<office:body><office:text>"
        + "".join(f"<text:p>{p}</text:p>" for p in paragraphs)
        + "</office:text></office:body></office:document-content>"
    )
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w") as archive:
        archive.writestr("mimetype", "application/vnd.oasis.opendocument.text")
        archive.writestr("content.xml", content)
    return buffer.getvalue()
