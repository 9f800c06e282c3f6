"""Precision ``⊑`` on types and evidences (covariant everywhere)."""
from __future__ import annotations

from gradual_sensitivity.calculus.binders import align_recvars, align_resources
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.types import (
    ArrowType,
    BaseType,
    ForallType,
    ListType,
    ProdType,
    RecType,
    RecVar,
    SType,
    SumType,
    Type,
)


def st_precision(g1: SType, g2: SType) -> bool:
    if isinstance(g1, RecVar) or isinstance(g2, RecVar):
        return isinstance(g1, RecVar) and isinstance(g2, RecVar) and g1.name == g2.name
    return g1.eff.precise_than(g2.eff) and _type_precision(g1.ty, g2.ty)


def _type_precision(t1: Type, t2: Type) -> bool:
    if isinstance(t1, BaseType) and isinstance(t2, BaseType):
        return t1.kind is t2.kind
    if isinstance(t1, ArrowType) and isinstance(t2, ArrowType):
        return st_precision(t1.dom, t2.dom) and st_precision(t1.cod, t2.cod)
    if isinstance(t1, ForallType) and isinstance(t2, ForallType):
        _, (b1, b2) = align_resources([(t1.resource, t1.body), (t2.resource, t2.body)])
        return st_precision(b1, b2)
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        return st_precision(t1.left, t2.left) and st_precision(t1.right, t2.right)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        return st_precision(t1.left, t2.left) and st_precision(t1.right, t2.right)
    if isinstance(t1, RecType) and isinstance(t2, RecType):
        _, (b1, b2) = align_recvars([(t1.var, t1.body), (t2.var, t2.body)])
        return st_precision(b1, b2)
    if isinstance(t1, ListType) and isinstance(t2, ListType):
        return st_precision(t1.elem, t2.elem)
    return False


def alpha_equal(g1: SType, g2: SType) -> bool:
    return st_precision(g1, g2) and st_precision(g2, g1)


def ev_precision(e1: Evidence, e2: Evidence) -> bool:
    """``ε1 ⊑² ε2``."""
    return st_precision(e1.lhs, e2.lhs) and st_precision(e1.rhs, e2.rhs)
