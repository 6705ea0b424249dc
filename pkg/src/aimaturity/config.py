"""Service configuration: file-based with environment-variable overrides.

Precedence (lowest to highest): built-in defaults, config file, environment
variables (``AIMATURITY_*``), explicit overrides passed by the caller.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import yaml

from .aggregation import DiagnosticThresholds
from .errors import ParseError

ENV_PREFIX = "AIMATURITY_"


@dataclass(frozen=True)
class ServiceConfig:
    store_path: Path
    questionnaire_path: Path | None  # None means the bundled canonical file
    host: str = "127.0.0.1"
    port: int = 8000
    api_token: str | None = None
    ui_dir: Path | None = None
    diagnostic_high: float = 4.0
    diagnostic_low: float = 2.0

    @property
    def thresholds(self) -> DiagnosticThresholds:
        return DiagnosticThresholds.of(self.diagnostic_high, self.diagnostic_low)


def load_config(
    config_file: Path | str | None = None,
    *,
    env: dict[str, str] | None = None,
    **overrides,
) -> ServiceConfig:
    env = dict(os.environ if env is None else env)
    values: dict = {
        "store_path": "assessments-store",
        "questionnaire_path": None,
        "host": "127.0.0.1",
        "port": 8000,
        "api_token": None,
        "ui_dir": None,
        "diagnostic_high": 4.0,
        "diagnostic_low": 2.0,
    }
    if config_file is not None:
        path = Path(config_file)
        try:
            loaded = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ParseError(f"unreadable config file {path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ParseError(f"config file {path} must hold a mapping")
        unknown = set(loaded) - set(values)
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    env_map = {
        "store_path": f"{ENV_PREFIX}STORE",
        "questionnaire_path": f"{ENV_PREFIX}QUESTIONNAIRE",
        "host": f"{ENV_PREFIX}HOST",
        "port": f"{ENV_PREFIX}PORT",
        "api_token": f"{ENV_PREFIX}TOKEN",
        "ui_dir": f"{ENV_PREFIX}UI_DIR",
        "diagnostic_high": f"{ENV_PREFIX}DIAGNOSTIC_HIGH",
        "diagnostic_low": f"{ENV_PREFIX}DIAGNOSTIC_LOW",
    }
    for key, env_key in env_map.items():
        if env_key in env and env[env_key] != "":
            values[key] = env[env_key]
    for key, value in overrides.items():
        if key not in values:
            raise ParseError(f"unknown config override {key!r}")
        if value is not None:
            values[key] = value
    return ServiceConfig(
        store_path=Path(values["store_path"]),
        questionnaire_path=(
            Path(values["questionnaire_path"]) if values["questionnaire_path"] else None
        ),
        host=str(values["host"]),
        port=int(values["port"]),
        api_token=values["api_token"] or None,
        ui_dir=Path(values["ui_dir"]) if values["ui_dir"] else None,
        diagnostic_high=float(values["diagnostic_high"]),
        diagnostic_low=float(values["diagnostic_low"]),
    )
