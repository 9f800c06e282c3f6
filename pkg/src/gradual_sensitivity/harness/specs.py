"""Metric-preservation specifications and their compiled form.

A specification names an open program, the types of its free variables,
closed helper expressions shared by both runs (``fixed``), the distance
environment ``Δ`` and optionally the effect ``Σ`` the program is claimed to
have. ``prepare`` typechecks the program and resolves every piece of text.

Example:

    from gradual_sensitivity.harness.specs import MPSpec, prepare

    spec = MPSpec(
        name="x+2y",
        source="x + y + y",
        env={"x": "Number[r]", "y": "Number[2r]"},
        delta="2r",
    )
    prepared = prepare(spec)
    str(prepared.claimed)  # '5r'
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from gradual_sensitivity.checker.elaborator import Compiled, TypeEnv, compile_source
from gradual_sensitivity.errors import GradualSensitivityError, HarnessError
from gradual_sensitivity.models.sensitivity import SensEnv, StaticSensEnv
from gradual_sensitivity.models.types import SType, effect_of, effects_of, is_base
from gradual_sensitivity.syntax.desugar import collect_annotations, desugar
from gradual_sensitivity.syntax.parser import parse_effect, parse_source, parse_type

logger = logging.getLogger(__name__)

Range = Tuple[float, float]


class MPSpec(BaseModel):
    """One program under test, as written in a harness YAML file."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1)
    source: str = Field(..., min_length=1)
    env: Dict[str, str] = Field(default_factory=dict, description="variable -> type text")
    fixed: Dict[str, str] = Field(
        default_factory=dict, description="variable -> closed expression shared by both runs"
    )
    delta: Optional[str] = Field(None, description="distance per resource, e.g. '2r'")
    claimed: Optional[str] = Field(None, description="claimed effect; defaults to the typed one")
    ranges: Dict[str, Range] = Field(default_factory=dict)
    bounded: bool = False

    @field_validator("ranges")
    @classmethod
    def _ordered_ranges(cls, value: Dict[str, Range]) -> Dict[str, Range]:
        for name, (low, high) in value.items():
            if not low < high:
                raise ValueError(f"range of '{name}' must satisfy low < high, got [{low}, {high}]")
        return value

    @model_validator(mode="after")
    def _disjoint_names(self) -> "MPSpec":
        shared = sorted(set(self.env) & set(self.fixed))
        if shared:
            raise ValueError(f"variables both free and fixed: {', '.join(shared)}")
        unknown = sorted(set(self.ranges) - set(self.env))
        if unknown:
            raise ValueError(f"ranges given for unknown variables: {', '.join(unknown)}")
        return self

    def program_source(self) -> str:
        """The source with every fixed helper bound by a leading ``let``."""
        lets = "".join(f"let {name} = {expr};\n" for name, expr in self.fixed.items())
        return lets + self.source

    def with_delta(self, delta: str) -> "MPSpec":
        return self.model_copy(update={"delta": delta})


@dataclass(frozen=True)
class PreparedSpec:
    spec: MPSpec
    compiled: Compiled
    inputs: tuple[tuple[str, SType], ...]
    type_env: TypeEnv
    delta: StaticSensEnv
    claimed: SensEnv

    @property
    def name(self) -> str:
        return self.spec.name

    def annotations(self) -> list[SType]:
        """Types written anywhere in the program or its environment."""
        written = collect_annotations(desugar(parse_source(self.spec.program_source())))
        return written + [stype for _, stype in self.inputs]

    def bounded(self) -> bool:
        """``Σ``, ``Δ`` and every written annotation have finite upper bounds."""
        if not self.claimed.bounded() or not self.delta.bounded():
            return False
        return all(eff.bounded() for stype in self.annotations() for eff in effects_of(stype))


def _parse(what: str, text: str, spec: MPSpec) -> SType:
    try:
        return parse_type(text)
    except GradualSensitivityError as exc:
        raise HarnessError(f"{spec.name}: cannot parse {what} '{text}': {exc.message}") from exc


def _static(text: str, spec: MPSpec) -> StaticSensEnv:
    try:
        effect = parse_effect(text)
    except GradualSensitivityError as exc:
        raise HarnessError(f"{spec.name}: cannot parse delta '{text}': {exc.message}") from exc
    if not effect.is_static():
        raise HarnessError(f"{spec.name}: delta '{text}' must give exact distances")
    return effect.lower()


def prepare(spec: MPSpec, *, base_result: bool = True) -> PreparedSpec:
    """Typecheck ``spec``'s program; type errors propagate unchanged.

    Distances are only defined on base types, so by default the program must
    produce one.
    """
    inputs = tuple(
        (name, _parse(f"type of '{name}'", text, spec)) for name, text in spec.env.items()
    )
    type_env = TypeEnv.of(dict(inputs))
    compiled = compile_source(spec.program_source(), type_env)
    if base_result and not is_base(compiled.stype):
        raise HarnessError(f"{spec.name}: result type {compiled.stype} is not a base type")

    if spec.delta is None:
        delta = StaticSensEnv.of({r: 1.0 for r in type_env.resources})
    else:
        delta = _static(spec.delta, spec)
    stray = delta.resources() - type_env.resources
    if stray:
        names = ", ".join(sorted(r.name for r in stray))
        raise HarnessError(f"{spec.name}: delta mentions resources not in scope: {names}")

    typed = effect_of(compiled.stype)
    if typed is None:
        raise HarnessError(f"{spec.name}: result type {compiled.stype} has no effect")
    claimed = typed
    if spec.claimed is not None:
        try:
            claimed = parse_effect(spec.claimed)
        except GradualSensitivityError as exc:
            raise HarnessError(f"{spec.name}: cannot parse claimed effect: {exc.message}") from exc
        if not typed.cleq(claimed):
            logger.warning(
                "%s: typed effect %s is not plausibly below the claimed %s",
                spec.name,
                typed,
                claimed,
            )
    logger.debug("Prepared %s at %s with delta %s", spec.name, compiled.stype, delta)
    return PreparedSpec(spec, compiled, inputs, type_env, delta, claimed)
