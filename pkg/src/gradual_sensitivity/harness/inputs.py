"""Generation of neighbouring input substitutions.

Both sides of a pair carry the same evidence, the self-interior of the
variable's declared type. The allowed distance of a variable is the lower
bound of its declared effect dotted with per-resource distances drawn below
``Δ``, so a pair is admissible for every sensitivity the type allows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.errors import HarnessError
from gradual_sensitivity.harness.distance import base_kind, constant_distance
from gradual_sensitivity.harness.specs import PreparedSpec, Range
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import ResourceVar, Sens, StaticSensEnv
from gradual_sensitivity.models.terms import Constant
from gradual_sensitivity.models.types import SType, effect_of
from gradual_sensitivity.models.values import ConstV, Env, Value

DEFAULT_RANGE: Range = (-10.0, 10.0)
DEFAULT_TOLERANCE = 1e-9


def input_value(stype: SType, constant: Constant) -> Value:
    return Value(Evidence(stype, stype), ConstV(constant), stype)


@dataclass(frozen=True)
class InputPair:
    first: Mapping[str, Value]
    second: Mapping[str, Value]
    allowances: Mapping[str, Sens]

    def envs(self) -> tuple[Env, Env]:
        return _env(self.first), _env(self.second)

    def describe(self) -> dict[str, tuple[str, str]]:
        return {
            name: (str(self.first[name].payload), str(self.second[name].payload))
            for name in self.first
        }


def _env(values: Mapping[str, Value]) -> Env:
    env = Env.empty()
    for name, value in values.items():
        env = env.extend(name, value)
    return env


def allowance(stype: SType, distances: StaticSensEnv) -> Sens:
    """How far apart two inputs of type ``stype`` may be under ``distances``."""
    effect = effect_of(stype)
    if effect is None:
        raise HarnessError(f"input type {stype} has no effect")
    return effect.lower().dot(distances)


def draw_distances(delta: StaticSensEnv, rng: np.random.Generator) -> StaticSensEnv:
    """Per-resource distances ``d_r ≤ Δ(r)``; half of the draws sit on the boundary."""
    drawn: dict[ResourceVar, Sens] = {}
    for resource, limit in delta.entries:
        if math.isinf(limit) or rng.random() < 0.5:
            drawn[resource] = limit
        else:
            drawn[resource] = float(rng.uniform(0.0, limit))
    return StaticSensEnv.of(drawn)


def _draw(
    kind: BaseKind, room: Sens, bounds: Range, rng: np.random.Generator
) -> tuple[Constant, Constant]:
    if kind is BaseKind.UNIT:
        return None, None
    if kind is BaseKind.BOOL:
        first = bool(rng.integers(0, 2))
        flip = math.isinf(room) and rng.random() < 0.5
        return first, (not first) if flip else first
    low, high = bounds
    first_num = float(rng.uniform(low, high))
    if math.isinf(room):
        return first_num, float(rng.uniform(low, high))
    if rng.random() < 0.25:
        shift = room if rng.random() < 0.5 else -room
    else:
        shift = float(rng.uniform(-room, room))
    return first_num, first_num + shift


def single_inputs(
    prepared: PreparedSpec, rng: np.random.Generator, value_range: Range = DEFAULT_RANGE
) -> Env:
    """One substitution for every free variable (used where no neighbour is needed)."""
    values: dict[str, Value] = {}
    for name, stype in prepared.inputs:
        first, _ = _draw(base_kind(stype), 0.0, prepared.spec.ranges.get(name, value_range), rng)
        values[name] = input_value(stype, first)
    return _env(values)


def neighbor_pair(
    prepared: PreparedSpec,
    rng: np.random.Generator,
    value_range: Range = DEFAULT_RANGE,
    tolerance: float = DEFAULT_TOLERANCE,
) -> InputPair:
    distances = draw_distances(prepared.delta, rng)
    first: dict[str, Value] = {}
    second: dict[str, Value] = {}
    rooms: dict[str, Sens] = {}
    for name, stype in prepared.inputs:
        kind = base_kind(stype)
        room = allowance(stype, distances)
        one, other = _draw(kind, room, prepared.spec.ranges.get(name, value_range), rng)
        if constant_distance(kind, one, other) > room + tolerance:
            raise HarnessError(
                f"{prepared.name}: generated inputs for '{name}' ({one}, {other}) "
                f"exceed their allowance {room}"
            )
        first[name] = input_value(stype, one)
        second[name] = input_value(stype, other)
        rooms[name] = room
    return InputPair(first, second, rooms)
