"""Service/CLI configuration: key = value file plus CNER_* env overrides.

The file format is flat text, one `key = value` per line, '#' comments.
Environment variables win over file values: CNER_PORT overrides `port`,
CNER_TAGGER_MODEL overrides `tagger_model`, and so on. Additional remote
extractors are declared as `remote.<id>.endpoint = <url>` lines.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

_ENV_PREFIX = "CNER_"
_REMOTE_KEY = re.compile(r"^remote\.([A-Za-z0-9_-]+)\.endpoint$")

DEFAULT_MAX_UPLOAD_BYTES = 5_242_880


class ConfigError(ValueError):
    """Configuration file or environment override is invalid."""


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    tagger_model: str | None = None
    relex_model: str | None = None
    gazetteer: str | None = None
    abbreviations: str | None = None
    heuristic_caps: bool = False
    remote_endpoint: str | None = None
    remote_timeout: float = 5.0
    doc_converter: str | None = None
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    static_dir: str | None = None
    extra_remotes: dict[str, str] = field(default_factory=dict)


_STR_KEYS = {
    "host",
    "tagger_model",
    "relex_model",
    "gazetteer",
    "abbreviations",
    "remote_endpoint",
    "doc_converter",
    "static_dir",
}
_INT_KEYS = {"port", "max_upload_bytes"}
_FLOAT_KEYS = {"remote_timeout"}
_BOOL_KEYS = {"heuristic_caps"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply(config: ServiceConfig, key: str, value: str, origin: str) -> None:
    remote = _REMOTE_KEY.match(key)
    if remote:
        config.extra_remotes[remote.group(1)] = value
        return
    if key in _STR_KEYS:
        setattr(config, key, value)
    elif key in _INT_KEYS:
        try:
            setattr(config, key, int(value))
        except ValueError:
            raise ConfigError(f"{origin}: {key} must be an integer, got {value!r}")
    elif key in _FLOAT_KEYS:
        try:
            setattr(config, key, float(value))
        except ValueError:
            raise ConfigError(f"{origin}: {key} must be a number, got {value!r}")
    elif key in _BOOL_KEYS:
        lowered = value.strip().lower()
        if lowered in _TRUE:
            setattr(config, key, True)
        elif lowered in _FALSE:
            setattr(config, key, False)
        else:
            raise ConfigError(f"{origin}: {key} must be a boolean, got {value!r}")
    else:
        raise ConfigError(f"{origin}: unknown configuration key {key!r}")


def load_config(path: str | None = None, environ: dict[str, str] | None = None) -> ServiceConfig:
    """Load the config file (optional) and apply environment overrides."""

    config = ServiceConfig()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            _apply(config, key, value, origin=f"{path}:{lineno}")

    env = os.environ if environ is None else environ
    for name, value in sorted(env.items()):
        if not name.startswith(_ENV_PREFIX):
            continue
        key = name[len(_ENV_PREFIX) :].lower()
        _apply(config, key, value, origin=f"environment {name}")
    return config
