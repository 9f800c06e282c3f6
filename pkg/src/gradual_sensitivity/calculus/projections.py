"""Type meta-functions (``dom``, ``cod``, ``inst``, ``unf`` …) and the branch join ``⋎``."""
from __future__ import annotations

from typing import Optional, Union

from gradual_sensitivity.calculus.binders import align_recvars, align_resources
from gradual_sensitivity.calculus.precision import alpha_equal
from gradual_sensitivity.calculus.subtyping import weakly_positive
from gradual_sensitivity.enums import Polarity, Projection
from gradual_sensitivity.models.sensitivity import EMPTY_ENV, SensEnv
from gradual_sensitivity.models.types import (
    ArrowType,
    BaseType,
    ForallType,
    ListType,
    ProdType,
    RecType,
    RecVar,
    SensType,
    SType,
    SumType,
    Type,
    add_effect,
    subst_recvar,
    subst_resource,
)


def dom(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ArrowType):
        return stype.ty.dom
    return None


def cod(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ArrowType):
        return add_effect(stype.ty.cod, stype.eff)
    return None


def first(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ProdType):
        return add_effect(stype.ty.left, stype.eff)
    return None


def second(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ProdType):
        return add_effect(stype.ty.right, stype.eff)
    return None


def left(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, SumType):
        return add_effect(stype.ty.left, stype.eff)
    return None


def right(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, SumType):
        return add_effect(stype.ty.right, stype.eff)
    return None


def unf(stype: SType) -> Optional[SType]:
    """``unf(⟨μα.G;Σ⟩) = [⟨μα.G;∅⟩/α]G + Σ``; the outer effect is counted once."""
    if isinstance(stype, SensType) and isinstance(stype.ty, RecType):
        rec = stype.ty
        unrolled = subst_recvar(rec.body, rec.var, SensType(rec, EMPTY_ENV))
        return add_effect(unrolled, stype.eff)
    return None


def inst(stype: SType, replacement: SensEnv) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ForallType):
        body = subst_resource(stype.ty.body, stype.ty.resource, replacement)
        return add_effect(body, stype.eff)
    return None


def elem(stype: SType) -> Optional[SType]:
    if isinstance(stype, SensType) and isinstance(stype.ty, ListType):
        return add_effect(stype.ty.elem, stype.eff)
    return None


def eff(stype: SType) -> Optional[SensEnv]:
    return stype.eff if isinstance(stype, SensType) else None


_PROJECTIONS = {
    Projection.DOM: dom,
    Projection.COD: cod,
    Projection.FIRST: first,
    Projection.SECOND: second,
    Projection.LEFT: left,
    Projection.RIGHT: right,
    Projection.UNF: unf,
    Projection.ELEM: elem,
}


def stype_project(
    kind: Projection, stype: SType, replacement: Optional[SensEnv] = None
) -> Union[SType, SensEnv, None]:
    if kind is Projection.EFF:
        return eff(stype)
    if kind is Projection.INST:
        if replacement is None:
            raise ValueError("inst requires a replacement effect")
        return inst(stype, replacement)
    return _PROJECTIONS[kind](stype)


def stype_join(g1: SType, g2: SType) -> Optional[SType]:
    """Least upper bound under subtyping: join effects, meet arrow domains."""
    return _bound(g1, g2, upper=True)


def stype_lower(g1: SType, g2: SType) -> Optional[SType]:
    """Greatest lower bound, used in contravariant positions of :func:`stype_join`."""
    return _bound(g1, g2, upper=False)


def _bound(g1: SType, g2: SType, *, upper: bool) -> Optional[SType]:
    if isinstance(g1, RecVar) or isinstance(g2, RecVar):
        if isinstance(g1, RecVar) and isinstance(g2, RecVar) and g1.name == g2.name:
            return g1
        return None
    ty = _bound_type(g1.ty, g2.ty, upper=upper)
    if ty is None:
        return None
    effect = g1.eff.join(g2.eff) if upper else g1.eff.minimum(g2.eff)
    return SensType(ty, effect)


def _bound_type(t1: Type, t2: Type, *, upper: bool) -> Optional[Type]:
    if isinstance(t1, BaseType) and isinstance(t2, BaseType):
        return t1 if t1.kind is t2.kind else None
    if isinstance(t1, ArrowType) and isinstance(t2, ArrowType):
        d = _bound(t1.dom, t2.dom, upper=not upper)
        c = _bound(t1.cod, t2.cod, upper=upper)
        return None if d is None or c is None else ArrowType(d, c)
    if isinstance(t1, ForallType) and isinstance(t2, ForallType):
        var, (b1, b2) = align_resources([(t1.resource, t1.body), (t2.resource, t2.body)])
        body = _bound(b1, b2, upper=upper)
        return None if body is None else ForallType(var, body)
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        lft, rgt = _bound(t1.left, t2.left, upper=upper), _bound(t1.right, t2.right, upper=upper)
        return None if lft is None or rgt is None else ProdType(lft, rgt)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        lft, rgt = _bound(t1.left, t2.left, upper=upper), _bound(t1.right, t2.right, upper=upper)
        return None if lft is None or rgt is None else SumType(lft, rgt)
    if isinstance(t1, ListType) and isinstance(t2, ListType):
        item = _bound(t1.elem, t2.elem, upper=upper)
        return None if item is None else ListType(item)
    if isinstance(t1, RecType) and isinstance(t2, RecType):
        var, (b1, b2) = align_recvars([(t1.var, t1.body), (t2.var, t2.body)])
        if weakly_positive(var, Polarity.POSITIVE, b1, b2):
            body = _bound(b1, b2, upper=upper)
            return None if body is None else RecType(var, body)
        return RecType(var, b1) if alpha_equal(b1, b2) else None
    return None
