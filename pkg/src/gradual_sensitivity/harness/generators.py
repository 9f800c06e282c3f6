"""Random sensitivity types and annotation widening.

Types are drawn over two resources with interval bounds from a small grid,
so that evidence operations hit their boundary cases often.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from gradual_sensitivity.calculus.evidence_ops import interior
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import (
    EMPTY_ENV,
    INF,
    UNKNOWN,
    GradualSens,
    ResourceVar,
    Sens,
    SensEnv,
)
from gradual_sensitivity.models.types import (
    ListType,
    ProdType,
    SensType,
    SType,
    SumType,
    arrow,
    boolean,
    map_effects,
    real,
)

GRID: tuple[Sens, ...] = (0.0, 1.0, 2.0, 3.0, 5.0, INF)
RESOURCES: tuple[ResourceVar, ...] = (ResourceVar("r"), ResourceVar("s"))


def _pick(rng: np.random.Generator, options: Sequence[Sens]) -> Sens:
    return float(options[int(rng.integers(0, len(options)))])


def random_sens(rng: np.random.Generator) -> GradualSens:
    first, second = _pick(rng, GRID), _pick(rng, GRID)
    return GradualSens(min(first, second), max(first, second))


def random_effect(rng: np.random.Generator, density: float = 0.6) -> SensEnv:
    effect = EMPTY_ENV
    for resource in RESOURCES:
        if rng.random() < density:
            effect = effect.add(SensEnv.single(resource, random_sens(rng)))
    return effect


def random_skeleton(rng: np.random.Generator, depth: int = 2) -> SType:
    """A type shape with empty effects; variants come from :func:`random_variant`."""
    choice = int(rng.integers(0, 7 if depth > 0 else 3))
    if choice == 0:
        return boolean()
    if choice in (1, 2):
        return real()
    if choice == 3:
        return arrow(random_skeleton(rng, depth - 1), random_skeleton(rng, depth - 1))
    if choice == 4:
        return SensType(ProdType(random_skeleton(rng, depth - 1), random_skeleton(rng, depth - 1)))
    if choice == 5:
        return SensType(SumType(random_skeleton(rng, depth - 1), random_skeleton(rng, depth - 1)))
    return SensType(ListType(random_skeleton(rng, depth - 1)))


def random_variant(skeleton: SType, rng: np.random.Generator) -> SType:
    return map_effects(skeleton, lambda _: random_effect(rng))


def evidence_chain(
    skeleton: SType, rng: np.random.Generator, length: int
) -> Optional[tuple[list[SType], list[Evidence]]]:
    """``length`` evidences where each consecutive pair refines a shared middle type.

    Evidence ``i`` is the interior of variants ``i`` and ``i + 1``, so its right
    side and the left side of evidence ``i + 1`` both refine variant ``i + 1``.
    """
    types = [random_variant(skeleton, rng) for _ in range(length + 1)]
    chain = [interior(a, b) for a, b in zip(types, types[1:])]
    if any(e is None for e in chain):
        return None
    return types, [e for e in chain if e is not None]


def refine_sens(sens: GradualSens, rng: np.random.Generator) -> GradualSens:
    """An exact sensitivity inside ``sens``."""
    inside = [sens.lo] + [value for value in GRID if sens.lo < value < sens.hi] + [sens.hi]
    return GradualSens.exact(_pick(rng, inside))


def refine_type(stype: SType, rng: np.random.Generator) -> SType:
    """A static type that ``stype`` is less precise than."""
    return map_effects(
        stype, lambda effect: SensEnv.of({r: refine_sens(g, rng) for r, g in effect})
    )


def widen_sens(sens: GradualSens, rng: np.random.Generator, *, strict: bool = False) -> GradualSens:
    """An interval containing ``sens``; ``strict`` forces a strictly larger one."""
    lows = [value for value in GRID if value < sens.lo] + [sens.lo]
    highs = [sens.hi] + [value for value in GRID if value > sens.hi]
    widened = GradualSens(_pick(rng, lows), _pick(rng, highs))
    if strict and widened == sens:
        return UNKNOWN
    return widened


def widen_effect(effect: SensEnv, rng: np.random.Generator, *, strict: bool = False) -> SensEnv:
    """Widen some entries of ``effect``; ``strict`` guarantees at least one grows."""
    entries = [(r, g) for r, g in effect if not g.is_unknown]
    if not entries:
        return effect
    forced = int(rng.integers(0, len(entries))) if strict else -1
    widened = {r: g for r, g in effect}
    for position, (resource, sens) in enumerate(entries):
        if position == forced:
            widened[resource] = widen_sens(sens, rng, strict=True)
        elif rng.random() < 0.5:
            widened[resource] = widen_sens(sens, rng)
    return SensEnv.of(widened)


def widen_type(stype: SType, rng: np.random.Generator) -> SType:
    return map_effects(stype, lambda effect: widen_effect(effect, rng))


def can_widen(stype: SType) -> bool:
    found: list[bool] = []

    def note(effect: SensEnv) -> SensEnv:
        found.append(any(not g.is_unknown for _, g in effect))
        return effect

    map_effects(stype, note)
    return any(found)


def widen_type_strictly(stype: SType, rng: np.random.Generator) -> SType:
    """Widen ``stype`` so that at least one of its effects strictly grows."""
    effects: list[SensEnv] = []

    def collect(effect: SensEnv) -> SensEnv:
        effects.append(effect)
        return effect

    map_effects(stype, collect)
    growable = [i for i, effect in enumerate(effects) if any(not g.is_unknown for _, g in effect)]
    if not growable:
        return stype
    forced = growable[int(rng.integers(0, len(growable)))]
    position = iter(range(len(effects)))

    def widen(effect: SensEnv) -> SensEnv:
        return widen_effect(effect, rng, strict=next(position) == forced)

    return map_effects(stype, widen)
