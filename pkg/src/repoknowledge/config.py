"""Analysis and service configuration, loadable from JSON or the environment."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

from .doe import DEFAULT_EXPERT_THRESHOLD, DoeCoefficients
from .errors import ValidationError
from .identities import load_alias_overrides
from .truckfactor import DEFAULT_TOP_FILES_LIMIT

__all__ = ["AnalysisConfig", "ServiceConfig", "load_config"]

_ENV_PREFIX = "REPOKNOWLEDGE_"


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs that change analysis results; snapshotted into every report."""

    expert_threshold: float = DEFAULT_EXPERT_THRESHOLD
    coefficients: DoeCoefficients = field(default_factory=DoeCoefficients)
    excludes: tuple[str, ...] = ()
    top_files_limit: int = DEFAULT_TOP_FILES_LIMIT
    alias_overrides: tuple[tuple[str, str], ...] = ()  # (alias, canonical)

    def __post_init__(self) -> None:
        if not 0.0 < self.expert_threshold <= 1.0:
            raise ValidationError(
                f"expert threshold must be in (0, 1], got {self.expert_threshold}"
            )
        if self.top_files_limit < 1:
            raise ValidationError("top files limit must be >= 1")

    @property
    def overrides_mapping(self) -> dict[str, str]:
        return dict(self.alias_overrides)


@dataclass(frozen=True)
class ServiceConfig:
    """Where the service stores data and how it listens."""

    store_path: str = "repoknowledge.db"
    workdir_root: str = "workdirs"
    worker_count: int = 2
    token_lifetime: int = 8 * 3600  # seconds
    cors_origins: tuple[str, ...] = ("*",)
    host: str = "127.0.0.1"
    port: int = 8000
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def __post_init__(self) -> None:
        if self.worker_count < 1:
            raise ValidationError("worker count must be >= 1")
        if self.token_lifetime < 1:
            raise ValidationError("token lifetime must be >= 1 second")


def _coefficients_from(doc: Mapping[str, Any]) -> DoeCoefficients:
    base = DoeCoefficients()
    return DoeCoefficients(
        intercept=float(doc.get("intercept", base.intercept)),
        adds=float(doc.get("adds", base.adds)),
        first_authorship=float(doc.get("firstAuthorship", base.first_authorship)),
        num_days=float(doc.get("numDays", base.num_days)),
        size=float(doc.get("size", base.size)),
    )


def _analysis_from(doc: Mapping[str, Any], base_dir: Path) -> AnalysisConfig:
    overrides: tuple[tuple[str, str], ...] = ()
    raw_overrides = doc.get("aliasOverrides")
    if isinstance(raw_overrides, str):
        mapping = load_alias_overrides(base_dir / raw_overrides)
        overrides = tuple(sorted(mapping.items()))
    elif isinstance(raw_overrides, Mapping):
        overrides = tuple(
            sorted((str(k).lower(), str(v).lower()) for k, v in raw_overrides.items())
        )
    return AnalysisConfig(
        expert_threshold=float(doc.get("expertThreshold", DEFAULT_EXPERT_THRESHOLD)),
        coefficients=_coefficients_from(doc.get("coefficients", {})),
        excludes=tuple(doc.get("excludes", ())),
        top_files_limit=int(doc.get("topFilesLimit", DEFAULT_TOP_FILES_LIMIT)),
        alias_overrides=overrides,
    )


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Build a ServiceConfig from an optional JSON file plus env overrides.

    Environment variables (REPOKNOWLEDGE_STORE, _WORKDIR, _WORKERS, _HOST,
    _PORT, _TOKEN_LIFETIME) take precedence over the file.
    """
    doc: dict[str, Any] = {}
    base_dir = Path.cwd()
    if path is not None:
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        base_dir = path.parent

    service_doc = doc.get("service", {})
    config = ServiceConfig(
        store_path=service_doc.get("storePath", "repoknowledge.db"),
        workdir_root=service_doc.get("workdirRoot", "workdirs"),
        worker_count=int(service_doc.get("workerCount", 2)),
        token_lifetime=int(service_doc.get("tokenLifetime", 8 * 3600)),
        cors_origins=tuple(service_doc.get("corsOrigins", ("*",))),
        host=service_doc.get("host", "127.0.0.1"),
        port=int(service_doc.get("port", 8000)),
        analysis=_analysis_from(doc, base_dir),
    )

    env = os.environ
    updates: dict[str, Any] = {}
    if _ENV_PREFIX + "STORE" in env:
        updates["store_path"] = env[_ENV_PREFIX + "STORE"]
    if _ENV_PREFIX + "WORKDIR" in env:
        updates["workdir_root"] = env[_ENV_PREFIX + "WORKDIR"]
    if _ENV_PREFIX + "WORKERS" in env:
        updates["worker_count"] = int(env[_ENV_PREFIX + "WORKERS"])
    if _ENV_PREFIX + "HOST" in env:
        updates["host"] = env[_ENV_PREFIX + "HOST"]
    if _ENV_PREFIX + "PORT" in env:
        updates["port"] = int(env[_ENV_PREFIX + "PORT"])
    if _ENV_PREFIX + "TOKEN_LIFETIME" in env:
        updates["token_lifetime"] = int(env[_ENV_PREFIX + "TOKEN_LIFETIME"])
    return replace(config, **updates) if updates else config
