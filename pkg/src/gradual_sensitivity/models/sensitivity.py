"""Gradual sensitivities, sensitivity effects and distance environments.

Example:

    from gradual_sensitivity.models.sensitivity import GradualSens, ResourceVar, SensEnv

    r = ResourceVar("r")
    effect = SensEnv.of({r: GradualSens.exact(2)}).add(SensEnv.single(r, GradualSens.unknown()))
    str(effect)  # "[2,inf]r"
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from functools import total_ordering
from typing import AbstractSet, Callable, Final, Iterable, Iterator, Mapping, Optional, Union

from gradual_sensitivity.enums import EnvPredicate, SensOp

Sens = float
INF: Final[Sens] = math.inf


def sens_add(a: Sens, b: Sens) -> Sens:
    return a + b


def sens_mul(a: Sens, b: Sens) -> Sens:
    """Multiply with the convention 0·∞ = ∞·0 = 0."""
    if a == 0 or b == 0:
        return 0.0
    return a * b


def format_sens(value: Sens) -> str:
    if math.isinf(value):
        return "inf"
    if float(value).is_integer():
        return str(int(value))
    return f"{value:g}"


class EmptyInterval:
    """Result of intersecting disjoint intervals."""

    _instance: Optional["EmptyInterval"] = None

    def __new__(cls) -> "EmptyInterval":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY_INTERVAL"


EMPTY_INTERVAL: Final = EmptyInterval()


@dataclass(frozen=True, slots=True)
class GradualSens:
    lo: Sens
    hi: Sens

    def __post_init__(self) -> None:
        errors: list[str] = []
        if math.isnan(self.lo) or math.isnan(self.hi):
            errors.append("sensitivity bounds must be numbers")
        elif self.lo < 0:
            errors.append(f"lower bound {self.lo} must be non-negative")
        elif self.lo > self.hi:
            errors.append(f"interval [{self.lo},{self.hi}] has lo > hi")
        if errors:
            raise ValueError("; ".join(errors))
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    @classmethod
    def exact(cls, value: Sens) -> "GradualSens":
        return cls(value, value)

    @classmethod
    def unknown(cls) -> "GradualSens":
        return cls(0.0, INF)

    @property
    def is_zero(self) -> bool:
        return self.lo == 0 and self.hi == 0

    @property
    def is_static(self) -> bool:
        return self.lo == self.hi

    @property
    def is_unknown(self) -> bool:
        return self.lo == 0 and math.isinf(self.hi)

    @property
    def bounded(self) -> bool:
        return not math.isinf(self.hi)

    def add(self, other: "GradualSens") -> "GradualSens":
        return GradualSens(sens_add(self.lo, other.lo), sens_add(self.hi, other.hi))

    def mul(self, other: "GradualSens") -> "GradualSens":
        return GradualSens(sens_mul(self.lo, other.lo), sens_mul(self.hi, other.hi))

    def join(self, other: "GradualSens") -> "GradualSens":
        return GradualSens(max(self.lo, other.lo), max(self.hi, other.hi))

    def minimum(self, other: "GradualSens") -> "GradualSens":
        """Boundwise minimum; the lower bound of two sensitivities under ≲."""
        return GradualSens(min(self.lo, other.lo), min(self.hi, other.hi))

    def meet(self, other: "GradualSens") -> Union["GradualSens", EmptyInterval]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return EMPTY_INTERVAL
        return GradualSens(lo, hi)

    def precise_than(self, other: "GradualSens") -> bool:
        """Interval inclusion: ``self ⊑ other``."""
        return self.lo >= other.lo and self.hi <= other.hi

    def cleq(self, other: "GradualSens") -> bool:
        return self.lo <= other.hi

    def clt(self, other: "GradualSens") -> bool:
        return self.lo < other.hi

    def contains(self, value: Sens) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self) -> str:
        if self.is_unknown:
            return "?"
        if self.is_static:
            return format_sens(self.lo)
        return f"[{format_sens(self.lo)},{format_sens(self.hi)}]"


ZERO: Final = GradualSens(0.0, 0.0)
ONE: Final = GradualSens(1.0, 1.0)
UNKNOWN: Final = GradualSens(0.0, INF)
INFINITE: Final = GradualSens(INF, INF)


def gsens_arith(
    op: SensOp, g1: GradualSens, g2: GradualSens
) -> Union[GradualSens, EmptyInterval]:
    if op is SensOp.ADD:
        return g1.add(g2)
    if op in (SensOp.MUL, SensOp.SCALE):
        return g1.mul(g2)
    if op is SensOp.JOIN:
        return g1.join(g2)
    if op is SensOp.MEET:
        return g1.meet(g2)
    raise ValueError(f"unsupported sensitivity operator '{op}'")


def gsens_precision(g1: GradualSens, g2: GradualSens) -> bool:
    return g1.precise_than(g2)


def gsens_cleq(g1: GradualSens, g2: GradualSens) -> bool:
    return g1.cleq(g2)


def gsens_clt(g1: GradualSens, g2: GradualSens) -> bool:
    return g1.clt(g2)


@total_ordering
@dataclass(frozen=True, slots=True)
class ResourceVar:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("resource names must be non-empty")
        object.__setattr__(self, "name", sys.intern(self.name))

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ResourceVar):
            return NotImplemented
        return self.name < other.name

    def __str__(self) -> str:
        return self.name


def _fresh_name(hint: str, taken: AbstractSet[str]) -> str:
    base = hint.split("~", 1)[0]
    index = 1
    while f"{base}~{index}" in taken:
        index += 1
    return f"{base}~{index}"


def fresh_resource(hint: str, avoid: AbstractSet[ResourceVar]) -> ResourceVar:
    """The first ``hint~n`` outside ``avoid``; source identifiers never contain ``~``."""
    return ResourceVar(_fresh_name(hint, {resource.name for resource in avoid}))


class FreshNames:
    """Per-run supply of renamed binders for values, whose free names are not tracked."""

    def __init__(self) -> None:
        self._issued: set[str] = set()

    def resource(self, hint: str, avoid: AbstractSet[ResourceVar]) -> ResourceVar:
        name = _fresh_name(hint, self._issued | {resource.name for resource in avoid})
        self._issued.add(name)
        return ResourceVar(name)


def _format_term(resource: ResourceVar, coefficient: GradualSens) -> str:
    if coefficient == ONE:
        return resource.name
    text = str(coefficient)
    if text == "inf":
        return f"inf {resource.name}"
    return f"{text}{resource.name}"


@dataclass(frozen=True, slots=True)
class SensEnv:
    """A sensitivity effect ``Σ``: resources mapped to gradual sensitivities.

    Stored in normal form (sorted, zero entries dropped) so that structural
    equality coincides with semantic equality.
    """

    entries: tuple[tuple[ResourceVar, GradualSens], ...] = ()

    def __post_init__(self) -> None:
        seen: set[ResourceVar] = set()
        for resource, _ in self.entries:
            if resource in seen:
                raise ValueError(f"duplicate resource '{resource}' in effect")
            seen.add(resource)
        normal = tuple(
            sorted(((r, g) for r, g in self.entries if not g.is_zero), key=lambda item: item[0])
        )
        object.__setattr__(self, "entries", normal)

    @classmethod
    def of(cls, mapping: Mapping[ResourceVar, GradualSens]) -> "SensEnv":
        return cls(tuple(mapping.items()))

    @classmethod
    def single(cls, resource: ResourceVar, sens: GradualSens = ONE) -> "SensEnv":
        return cls(((resource, sens),))

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def as_dict(self) -> dict[ResourceVar, GradualSens]:
        return dict(self.entries)

    def get(self, resource: ResourceVar) -> GradualSens:
        for candidate, sens in self.entries:
            if candidate == resource:
                return sens
        return ZERO

    def resources(self) -> frozenset[ResourceVar]:
        return frozenset(r for r, _ in self.entries)

    def __iter__(self) -> Iterator[tuple[ResourceVar, GradualSens]]:
        return iter(self.entries)

    def _pointwise(
        self, other: "SensEnv", combine: Callable[[GradualSens, GradualSens], GradualSens]
    ) -> "SensEnv":
        domain = self.resources() | other.resources()
        return SensEnv(tuple((r, combine(self.get(r), other.get(r))) for r in domain))

    def add(self, other: "SensEnv") -> "SensEnv":
        return self._pointwise(other, GradualSens.add)

    def join(self, other: "SensEnv") -> "SensEnv":
        return self._pointwise(other, GradualSens.join)

    def minimum(self, other: "SensEnv") -> "SensEnv":
        return self._pointwise(other, GradualSens.minimum)

    def meet(self, other: "SensEnv") -> Optional["SensEnv"]:
        """Pointwise intersection, or ``None`` when some entry is empty."""
        entries: list[tuple[ResourceVar, GradualSens]] = []
        for resource in self.resources() | other.resources():
            met = self.get(resource).meet(other.get(resource))
            if isinstance(met, EmptyInterval):
                return None
            entries.append((resource, met))
        return SensEnv(tuple(entries))

    def scale(self, factor: GradualSens) -> "SensEnv":
        return SensEnv(tuple((r, factor.mul(g)) for r, g in self.entries))

    def remove(self, resource: ResourceVar) -> "SensEnv":
        return SensEnv(tuple((r, g) for r, g in self.entries if r != resource))

    def subst(self, resource: ResourceVar, replacement: "SensEnv") -> "SensEnv":
        """``[replacement/resource]self``."""
        coefficient = self.get(resource)
        if coefficient.is_zero:
            return self
        return self.remove(resource).add(replacement.scale(coefficient))

    def rename(self, mapping: Mapping[ResourceVar, ResourceVar]) -> "SensEnv":
        result = SensEnv()
        for resource, sens in self.entries:
            target = mapping.get(resource, resource)
            result = result.add(SensEnv.single(target, sens))
        return result

    def dot(self, distances: "SensEnv") -> GradualSens:
        total = ZERO
        for resource, sens in self.entries:
            total = total.add(sens.mul(distances.get(resource)))
        return total

    def lower(self) -> "StaticSensEnv":
        return StaticSensEnv(tuple((r, g.lo) for r, g in self.entries))

    def upper(self) -> "StaticSensEnv":
        return StaticSensEnv(tuple((r, g.hi) for r, g in self.entries))

    def bounded(self) -> bool:
        return all(g.bounded for _, g in self.entries)

    def is_static(self) -> bool:
        return all(g.is_static for _, g in self.entries)

    def precise_than(self, other: "SensEnv") -> bool:
        domain = self.resources() | other.resources()
        return all(self.get(r).precise_than(other.get(r)) for r in domain)

    def cleq(self, other: "SensEnv") -> bool:
        domain = self.resources() | other.resources()
        return all(self.get(r).cleq(other.get(r)) for r in domain)

    def __str__(self) -> str:
        return " + ".join(_format_term(r, g) for r, g in self.entries)


EMPTY_ENV: Final = SensEnv()


@dataclass(frozen=True, slots=True)
class StaticSensEnv:
    entries: tuple[tuple[ResourceVar, Sens], ...] = field(default=())

    def __post_init__(self) -> None:
        errors = [f"sensitivity of '{r}' must be non-negative" for r, s in self.entries if s < 0]
        if errors:
            raise ValueError("; ".join(errors))
        kept = ((r, float(s)) for r, s in self.entries if s != 0)
        normal = tuple(sorted(kept, key=lambda item: item[0]))
        object.__setattr__(self, "entries", normal)

    @classmethod
    def of(cls, mapping: Mapping[ResourceVar, Sens]) -> "StaticSensEnv":
        return cls(tuple(mapping.items()))

    def get(self, resource: ResourceVar) -> Sens:
        for candidate, sens in self.entries:
            if candidate == resource:
                return sens
        return 0.0

    def resources(self) -> frozenset[ResourceVar]:
        return frozenset(r for r, _ in self.entries)

    def embed(self) -> SensEnv:
        return SensEnv(tuple((r, GradualSens.exact(s)) for r, s in self.entries))

    def dot(self, distances: "StaticSensEnv") -> Sens:
        return sum((sens_mul(s, distances.get(r)) for r, s in self.entries), 0.0)

    def bounded(self) -> bool:
        return all(not math.isinf(s) for _, s in self.entries)

    def __str__(self) -> str:
        return str(self.embed())


def env_arith(op: SensOp, *args: object) -> SensEnv:
    if op is SensOp.SCALE:
        factor, env = args
        assert isinstance(factor, GradualSens) and isinstance(env, SensEnv)
        return env.scale(factor)
    left, right = args
    assert isinstance(left, SensEnv) and isinstance(right, SensEnv)
    if op is SensOp.ADD:
        return left.add(right)
    if op is SensOp.JOIN:
        return left.join(right)
    if op is SensOp.MEET:
        met = left.meet(right)
        if met is None:
            raise ValueError(f"effects {left} and {right} have disjoint entries")
        return met
    raise ValueError(f"unsupported effect operator '{op}'")


def env_subst(replacement: SensEnv, resource: ResourceVar, target: SensEnv) -> SensEnv:
    return target.subst(resource, replacement)


def env_dot(senv: SensEnv, denv: SensEnv) -> GradualSens:
    return senv.dot(denv)


def env_lower(senv: SensEnv) -> StaticSensEnv:
    return senv.lower()


def env_predicates(kind: EnvPredicate, *envs: SensEnv) -> bool:
    if kind is EnvPredicate.BOUNDED:
        return all(env.bounded() for env in envs)
    if kind is EnvPredicate.STATIC:
        return all(env.is_static() for env in envs)
    left, right = envs
    if kind is EnvPredicate.PRECISION:
        return left.precise_than(right)
    return left.cleq(right)


def sum_envs(envs: Iterable[SensEnv]) -> SensEnv:
    total = EMPTY_ENV
    for env in envs:
        total = total.add(env)
    return total
