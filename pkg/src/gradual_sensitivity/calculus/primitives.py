"""Primitive operators: typing (``Iop``), evidence (``Iop²``) and semantics."""
from __future__ import annotations

import operator
from typing import Callable, Optional, Sequence, Union

from gradual_sensitivity.enums import BaseKind, PrimOp
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import INFINITE, sum_envs
from gradual_sensitivity.models.types import SensType, SType, boolean, is_base, real

Constant = Union[float, bool, None]

_ARITH_LINEAR = {PrimOp.ADD, PrimOp.SUB}
_ARITH_SCALED = {PrimOp.MUL, PrimOp.DIV}
_ORDER = {PrimOp.LT, PrimOp.LE, PrimOp.GT, PrimOp.GE}
_EQUALITY = {PrimOp.EQ, PrimOp.NEQ}
_LOGIC = {PrimOp.AND, PrimOp.OR}


def iop_type(op: PrimOp, args: Sequence[SType]) -> Optional[SType]:
    if len(args) != op.arity or not all(isinstance(a, SensType) for a in args):
        return None
    effects = [a.eff for a in args if isinstance(a, SensType)]
    total = sum_envs(effects)
    scaled = total.scale(INFINITE)

    def all_of(kind: BaseKind) -> bool:
        return all(is_base(a, kind) for a in args)

    if op is PrimOp.NEG:
        return real(total) if all_of(BaseKind.REAL) else None
    if op is PrimOp.NOT:
        return boolean(total) if all_of(BaseKind.BOOL) else None
    if op in _ARITH_LINEAR:
        return real(total) if all_of(BaseKind.REAL) else None
    if op in _ARITH_SCALED:
        return real(scaled) if all_of(BaseKind.REAL) else None
    if op in _ORDER:
        return boolean(scaled) if all_of(BaseKind.REAL) else None
    if op in _EQUALITY:
        if all_of(BaseKind.REAL) or all_of(BaseKind.BOOL):
            return boolean(scaled)
        return None
    if op in _LOGIC:
        return boolean(total) if all_of(BaseKind.BOOL) else None
    return None


def iop_evidence(op: PrimOp, evidences: Sequence[Evidence]) -> Evidence:
    lhs = iop_type(op, [e.lhs for e in evidences])
    rhs = iop_type(op, [e.rhs for e in evidences])
    if lhs is None or rhs is None:
        raise ValueError(f"operator '{op.value}' is not defined on {list(map(str, evidences))}")
    return Evidence(lhs, rhs)


def _divide(a: float, b: float) -> float:
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return a / b


_SEMANTICS: dict[PrimOp, Callable[..., Constant]] = {
    PrimOp.ADD: operator.add,
    PrimOp.SUB: operator.sub,
    PrimOp.MUL: operator.mul,
    PrimOp.DIV: _divide,
    PrimOp.LT: operator.lt,
    PrimOp.LE: operator.le,
    PrimOp.GT: operator.gt,
    PrimOp.GE: operator.ge,
    PrimOp.EQ: operator.eq,
    PrimOp.NEQ: operator.ne,
    PrimOp.AND: lambda a, b: a and b,
    PrimOp.OR: lambda a, b: a or b,
    PrimOp.NOT: operator.not_,
    PrimOp.NEG: operator.neg,
}


def apply_prim(op: PrimOp, args: Sequence[Constant]) -> Constant:
    """``⟦op⟧``; raises :class:`ZeroDivisionError` on ``/ 0``."""
    result = _SEMANTICS[op](*args)
    if isinstance(result, bool):
        return result
    return float(result) if result is not None else None
