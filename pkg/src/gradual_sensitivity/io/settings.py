"""Run settings: defaults, an optional ``gsens.yaml`` and ``GSENS_*`` overrides.

Later sources win: field defaults, then the YAML file, then environment
variables, then whatever the command line passes to :meth:`GsensSettings.override`.

Example:

    from gradual_sensitivity.io.settings import load_settings

    settings = load_settings()          # reads ./gsens.yaml when present
    settings.override(seed=7).seed      # 7
"""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from gradual_sensitivity.errors import SettingsError
from gradual_sensitivity.io.loader import read_yaml_mapping

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "gsens.yaml"
ENV_PREFIX = "GSENS_"
DEFAULT_SEED = 20240601


class GsensSettings(BaseModel):
    """Tunables shared by the evaluator, the harness and the DP verifier."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = Field(DEFAULT_SEED, description="Seed for every random stream")
    step_budget: int = Field(10_000_000, gt=0, description="Machine steps before giving up")
    value_range: Tuple[float, float] = Field((-10.0, 10.0), description="Generated input range")
    tolerance: float = Field(1e-9, ge=0, description="Slack allowed on distance bounds")
    mp_pairs: int = Field(200, gt=0)
    widenings: int = Field(1000, gt=0)
    evidence_trials: int = Field(100_000, gt=0)
    dp_tau: float = Field(0.15, ge=0, description="Relative slack on the e^eps ratio bound")
    dp_min_bin: int = Field(500, gt=0, description="Minimum bin count for the ratio test")
    dp_bins: int = Field(40, gt=0)
    dp_samples: int = Field(200_000, gt=0)
    workers: int = Field(1, gt=0, description="Threads used by the harness and DP sampling")

    @field_validator("value_range", mode="before")
    @classmethod
    def _split_range(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(","))
        return value

    @field_validator("value_range")
    @classmethod
    def _ordered_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        low, high = value
        if not low < high:
            raise ValueError(f"value_range must satisfy low < high, got [{low}, {high}]")
        return value

    @classmethod
    def allowed_keys(cls) -> list[str]:
        return sorted(cls.model_fields)

    def override(self, **changes: Any) -> "GsensSettings":
        """A copy with the non-``None`` entries of ``changes`` applied and validated."""
        updates = {key: value for key, value in changes.items() if value is not None}
        if not updates:
            return self
        return _validated({**self.model_dump(), **updates}, "command line")


def _validated(data: Mapping[str, Any], source: str) -> GsensSettings:
    unknown = sorted(set(data) - set(GsensSettings.model_fields))
    if unknown:
        raise SettingsError(
            f"Unknown keys in {source}: {', '.join(unknown)}",
            suggestion=f"allowed keys: {', '.join(GsensSettings.allowed_keys())}",
        )
    try:
        return GsensSettings.model_validate(dict(data))
    except ValidationError as exc:
        raise SettingsError(f"Invalid settings in {source}: {exc}") from exc


def environment_overrides(environ: Optional[Mapping[str, str]] = None) -> dict[str, str]:
    """``GSENS_<FIELD>`` variables, keyed by field name."""
    environ = os.environ if environ is None else environ
    found: dict[str, str] = {}
    for key in GsensSettings.model_fields:
        value = environ.get(ENV_PREFIX + key.upper())
        if value is not None:
            found[key] = value
    return found


def load_settings(
    path: Optional[Path] = None, *, environ: Optional[Mapping[str, str]] = None
) -> GsensSettings:
    """Resolve defaults, the YAML file and the environment.

    Without an explicit ``path`` the loader looks for ``gsens.yaml`` in the
    working directory and silently skips it when absent.
    """
    data: dict[str, Any] = {}
    if path is None:
        candidate = Path.cwd() / DEFAULT_CONFIG_NAME
        path = candidate if candidate.is_file() else None
    if path is not None:
        logger.info("Reading settings from %s", path)
        data.update(read_yaml_mapping(path, context="settings"))
        _validated(data, str(path))
    env = environment_overrides(environ)
    if env:
        logger.debug("Environment overrides: %s", ", ".join(sorted(env)))
        data.update(env)
    return _validated(data, "environment" if env else "settings")
