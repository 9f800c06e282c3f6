"""Metrics on base-typed values."""
from __future__ import annotations

from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.errors import HarnessError
from gradual_sensitivity.models.sensitivity import INF, Sens
from gradual_sensitivity.models.types import BaseType, SensType, SType
from gradual_sensitivity.models.values import ConstV, Value


def base_kind(stype: SType) -> BaseKind:
    if isinstance(stype, SensType) and isinstance(stype.ty, BaseType):
        return stype.ty.kind
    raise HarnessError(f"distance is only defined on base types, not {stype}")


def distance(stype: SType, first: Value, second: Value) -> Sens:
    """``|x₁ − x₂|`` on numbers, ``0``/``∞`` on booleans and ``0`` on unit."""
    kind = base_kind(stype)
    if not isinstance(first.payload, ConstV) or not isinstance(second.payload, ConstV):
        raise HarnessError(f"distance needs constants, got {first.payload} and {second.payload}")
    return constant_distance(kind, first.payload.value, second.payload.value)


def constant_distance(kind: BaseKind, first: object, second: object) -> Sens:
    if kind is BaseKind.UNIT:
        return 0.0
    if kind is BaseKind.BOOL:
        return 0.0 if first == second else INF
    assert isinstance(first, (int, float)) and isinstance(second, (int, float))
    return abs(float(first) - float(second))
