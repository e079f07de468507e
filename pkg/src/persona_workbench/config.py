"""Service configuration: file paths, provider selection, retrieval knobs."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from .errors import ValidationError

PROVIDERS = ("stub", "remote")


def packaged_data(name: str) -> Path:
    """Path of a data file shipped inside the package."""
    return Path(str(resources.files("persona_workbench").joinpath("data", name)))


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    corpus_path: Path = field(default_factory=lambda: packaged_data("story_corpus.jsonl"))
    catalog_path: Path = field(default_factory=lambda: packaged_data("ability_catalog.jsonl"))
    question_bank_path: Path = field(default_factory=lambda: packaged_data("question_bank.jsonl"))
    store_dir: Path = Path("persona_store")
    provider: str = "stub"
    remote_base_url: str = ""
    remote_model: str = ""
    remote_api_key_env: str = "PERSONA_WORKBENCH_API_KEY"
    retrieval_k: int = 4
    stub_seed: int = 0
    reply_word_cap: int = 120
    history_window: int | None = None
    max_inflight: int = 4
    request_timeout: float = 30.0
    cors_origins: tuple[str, ...] = ("*",)

    def __post_init__(self) -> None:
        self.corpus_path = Path(self.corpus_path)
        self.catalog_path = Path(self.catalog_path)
        self.question_bank_path = Path(self.question_bank_path)
        self.store_dir = Path(self.store_dir)
        self.cors_origins = tuple(self.cors_origins)
        if self.provider not in PROVIDERS:
            raise ValidationError(
                f"provider must be one of {PROVIDERS}, got {self.provider!r}", field="provider"
            )
        if self.retrieval_k < 1:
            raise ValidationError("retrieval_k must be >= 1", field="retrieval_k")
        if self.provider == "remote":
            if not self.remote_base_url:
                raise ValidationError(
                    "remote provider needs remote_base_url", field="remote_base_url"
                )
            if not os.environ.get(self.remote_api_key_env):
                raise ValidationError(
                    f"remote provider needs the {self.remote_api_key_env} env var set",
                    field="remote_api_key_env",
                )

    def remote_api_key(self) -> str:
        return os.environ.get(self.remote_api_key_env, "")


def load_config(path: str | Path) -> ServiceConfig:
    """Load a JSON config file; unknown keys are rejected."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a JSON object")
    known = {f.name for f in fields(ServiceConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    return ServiceConfig(**data)
