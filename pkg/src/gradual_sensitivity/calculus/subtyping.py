"""Consistent subtyping ``≲`` and the weakly-positive recursion check."""
from __future__ import annotations

from gradual_sensitivity.calculus.binders import align_recvars, align_resources
from gradual_sensitivity.enums import Polarity
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


def consistent_subtyping(g1: SType, g2: SType) -> bool:
    if isinstance(g1, RecVar) or isinstance(g2, RecVar):
        return isinstance(g1, RecVar) and isinstance(g2, RecVar) and g1.name == g2.name
    return g1.eff.cleq(g2.eff) and _type_subtyping(g1.ty, g2.ty)


def _type_subtyping(t1: Type, t2: Type) -> bool:
    if isinstance(t1, BaseType) and isinstance(t2, BaseType):
        return t1.kind is t2.kind
    if isinstance(t1, ArrowType) and isinstance(t2, ArrowType):
        return consistent_subtyping(t2.dom, t1.dom) and consistent_subtyping(t1.cod, t2.cod)
    if isinstance(t1, ForallType) and isinstance(t2, ForallType):
        _, (b1, b2) = align_resources([(t1.resource, t1.body), (t2.resource, t2.body)])
        return consistent_subtyping(b1, b2)
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        return consistent_subtyping(t1.left, t2.left) and consistent_subtyping(t1.right, t2.right)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        return consistent_subtyping(t1.left, t2.left) and consistent_subtyping(t1.right, t2.right)
    if isinstance(t1, ListType) and isinstance(t2, ListType):
        return consistent_subtyping(t1.elem, t2.elem)
    if isinstance(t1, RecType) and isinstance(t2, RecType):
        var, (b1, b2) = align_recvars([(t1.var, t1.body), (t2.var, t2.body)])
        if weakly_positive(var, Polarity.POSITIVE, b1, b2):
            return consistent_subtyping(b1, b2)
        return plausible_equality(b1, b2)
    return False


def plausible_equality(g1: SType, g2: SType) -> bool:
    return consistent_subtyping(g1, g2) and consistent_subtyping(g2, g1)


def polarities(var: str, stype: SType, polarity: Polarity = Polarity.POSITIVE) -> set[Polarity]:
    """Polarities at which the recursive variable ``var`` occurs free in ``stype``."""
    if isinstance(stype, RecVar):
        return {polarity} if stype.name == var else set()
    ty = stype.ty
    if isinstance(ty, BaseType):
        return set()
    if isinstance(ty, ArrowType):
        return polarities(var, ty.dom, polarity.flip()) | polarities(var, ty.cod, polarity)
    if isinstance(ty, ForallType):
        return polarities(var, ty.body, polarity)
    if isinstance(ty, (ProdType, SumType)):
        return polarities(var, ty.left, polarity) | polarities(var, ty.right, polarity)
    if isinstance(ty, RecType):
        return set() if ty.var == var else polarities(var, ty.body, polarity)
    return polarities(var, ty.elem, polarity)


def weakly_positive(var: str, polarity: Polarity, g1: SType, g2: SType) -> bool:
    return polarities(var, g1) <= {polarity} and polarities(var, g2) <= {polarity}
