"""YAML loaders for settings files and harness specifications.

Example:

    from gradual_sensitivity.io.loader import SpecLoader

    loader = SpecLoader.from_yaml_path(Path("corpus/mp_corpus.yaml"))
    specs = loader.build_specs()
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List

from pydantic import ValidationError
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from gradual_sensitivity.errors import HarnessError, SettingsError
from gradual_sensitivity.harness.specs import MPSpec

logger = logging.getLogger(__name__)

SPEC_FILE_ALLOWED_KEYS = {"description", "programs"}
PROGRAM_ALLOWED_KEYS = set(MPSpec.model_fields)
PROGRAM_SUFFIX = ".gsoul"


def _yaml_loader() -> YAML:
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    return yaml


def read_yaml_mapping(path: Path, *, context: str) -> Dict[str, Any]:
    """Load ``path`` and insist on a top-level mapping; I/O problems are settings errors."""
    try:
        with path.open("r", encoding="utf-8") as handle:
            data = _yaml_loader().load(handle) or {}
    except OSError as exc:
        raise SettingsError(f"cannot read {context} file {path}: {exc.strerror}") from exc
    except YAMLError as exc:
        raise SettingsError(f"{context} file {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise SettingsError(f"{context} file {path} must hold a mapping")
    return data


def read_program(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SettingsError(f"cannot read program {path}: {exc.strerror}") from exc


@dataclass(slots=True)
class SpecLoader:
    raw: Dict[str, Any]

    @classmethod
    def from_yaml_path(cls, path: Path) -> "SpecLoader":
        return cls(raw=read_yaml_mapping(path, context="specification"))

    @classmethod
    def from_string(cls, payload: str) -> "SpecLoader":
        try:
            data = _yaml_loader().load(payload) or {}
        except YAMLError as exc:
            raise HarnessError(f"specification is not valid YAML: {exc}") from exc
        if not isinstance(data, dict):
            raise HarnessError("specification must hold a mapping")
        return cls(raw=data)

    @classmethod
    def from_program_path(cls, path: Path) -> "SpecLoader":
        """A closed ``.gsoul`` program as a one-entry specification."""
        return cls(raw={"programs": [{"name": path.stem, "source": read_program(path)}]})

    @classmethod
    def from_path(cls, path: Path) -> "SpecLoader":
        if path.suffix == PROGRAM_SUFFIX:
            return cls.from_program_path(path)
        return cls.from_yaml_path(path)

    def build_specs(self) -> List[MPSpec]:
        self._validate_keys(self.raw, SPEC_FILE_ALLOWED_KEYS, context="specification")
        entries = self.raw.get("programs") or []
        if not isinstance(entries, list):
            raise HarnessError("'programs' must be a list")
        specs: List[MPSpec] = []
        for position, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise HarnessError(f"programs[{position}] must be a mapping")
            label = str(entry.get("name", f"programs[{position}]"))
            self._validate_keys(entry, PROGRAM_ALLOWED_KEYS, context=label)
            try:
                specs.append(MPSpec.model_validate(_normalised(entry)))
            except ValidationError as exc:
                raise HarnessError(f"invalid program {label}: {exc}") from exc
        names = [spec.name for spec in specs]
        duplicates = sorted({name for name in names if names.count(name) > 1})
        if duplicates:
            raise HarnessError(f"duplicate program names: {', '.join(duplicates)}")
        logger.info("Loaded %d program specifications", len(specs))
        return specs

    @staticmethod
    def _validate_keys(cfg: Dict[str, Any], allowed: set[str], *, context: str) -> None:
        unknown = set(cfg or {}) - allowed
        if unknown:
            keys = ", ".join(sorted(unknown))
            raise HarnessError(
                f"Unknown keys in {context}: {keys}",
                suggestion=f"allowed keys: {', '.join(sorted(allowed))}",
            )


def _normalised(entry: Dict[str, Any]) -> Dict[str, Any]:
    """YAML numbers in ``delta``/``claimed`` become text; ranges become pairs."""
    data = dict(entry)
    for key in ("delta", "claimed"):
        if isinstance(data.get(key), (int, float)):
            data[key] = str(data[key])
    if isinstance(data.get("ranges"), dict):
        data["ranges"] = {name: tuple(bounds) for name, bounds in data["ranges"].items()}
    return data
