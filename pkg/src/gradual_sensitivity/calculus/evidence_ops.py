"""Interior, consistent transitivity and evidence inversion.

All three operate on one interval at a time:

    I([s1,s2], [s3,s4])              = ⟨[s1, s2⊓s4], [s1⊔s3, s4]⟩
    ⟨[s11,s12],[s13,s14]⟩ ∘ ⟨[s21,s22],[s23,s24]⟩
                                     = ⟨[s11, s12⊓s14⊓s22], [s13⊔s21⊔s23, s24]⟩

and are undefined whenever a resulting lower bound exceeds its upper bound.
Arrow domains are handled with the arguments swapped.
"""
from __future__ import annotations

from typing import Optional

from gradual_sensitivity.calculus import projections
from gradual_sensitivity.calculus.binders import align_recvars, align_resources
from gradual_sensitivity.calculus.subtyping import weakly_positive
from gradual_sensitivity.enums import Polarity, Projection
from gradual_sensitivity.errors import EvidenceInvariantError
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import GradualSens, ResourceVar, SensEnv
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
    join_effect,
)

Pair = tuple[SType, SType]
TypePair = tuple[Type, Type]


def _interior_sens(g1: GradualSens, g2: GradualSens) -> Optional[tuple[GradualSens, GradualSens]]:
    hi = min(g1.hi, g2.hi)
    lo = max(g1.lo, g2.lo)
    if g1.lo > hi or lo > g2.hi:
        return None
    return GradualSens(g1.lo, hi), GradualSens(lo, g2.hi)


def _interior_env(e1: SensEnv, e2: SensEnv) -> Optional[tuple[SensEnv, SensEnv]]:
    lhs: list[tuple[ResourceVar, GradualSens]] = []
    rhs: list[tuple[ResourceVar, GradualSens]] = []
    for resource in e1.resources() | e2.resources():
        pair = _interior_sens(e1.get(resource), e2.get(resource))
        if pair is None:
            return None
        lhs.append((resource, pair[0]))
        rhs.append((resource, pair[1]))
    return SensEnv(tuple(lhs)), SensEnv(tuple(rhs))


def interior(g1: SType, g2: SType) -> Optional[Evidence]:
    pair = _interior(g1, g2)
    return None if pair is None else Evidence(*pair)


def _interior(g1: SType, g2: SType) -> Optional[Pair]:
    if isinstance(g1, RecVar) or isinstance(g2, RecVar):
        if isinstance(g1, RecVar) and isinstance(g2, RecVar) and g1.name == g2.name:
            return g1, g2
        return None
    effects = _interior_env(g1.eff, g2.eff)
    types = _interior_type(g1.ty, g2.ty)
    if effects is None or types is None:
        return None
    return SensType(types[0], effects[0]), SensType(types[1], effects[1])


def _interior_type(t1: Type, t2: Type) -> Optional[TypePair]:
    if isinstance(t1, BaseType) and isinstance(t2, BaseType):
        return (t1, t2) if t1.kind is t2.kind else None
    if isinstance(t1, ArrowType) and isinstance(t2, ArrowType):
        doms = _interior(t2.dom, t1.dom)
        cods = _interior(t1.cod, t2.cod)
        if doms is None or cods is None:
            return None
        return ArrowType(doms[1], cods[0]), ArrowType(doms[0], cods[1])
    if isinstance(t1, ForallType) and isinstance(t2, ForallType):
        var, (b1, b2) = align_resources([(t1.resource, t1.body), (t2.resource, t2.body)])
        bodies = _interior(b1, b2)
        return None if bodies is None else (ForallType(var, bodies[0]), ForallType(var, bodies[1]))
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        return _pairwise(ProdType, t1.left, t1.right, t2.left, t2.right)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        return _pairwise(SumType, t1.left, t1.right, t2.left, t2.right)
    if isinstance(t1, ListType) and isinstance(t2, ListType):
        items = _interior(t1.elem, t2.elem)
        return None if items is None else (ListType(items[0]), ListType(items[1]))
    if isinstance(t1, RecType) and isinstance(t2, RecType):
        var, (b1, b2) = align_recvars([(t1.var, t1.body), (t2.var, t2.body)])
        if weakly_positive(var, Polarity.POSITIVE, b1, b2):
            bodies = _interior(b1, b2)
            if bodies is None:
                return None
            return RecType(var, bodies[0]), RecType(var, bodies[1])
        equal = meet_types(b1, b2)
        return None if equal is None else (RecType(var, equal), RecType(var, equal))
    return None


def _pairwise(
    cls: type[ProdType] | type[SumType], l1: SType, r1: SType, l2: SType, r2: SType
) -> Optional[TypePair]:
    lefts = _interior(l1, l2)
    rights = _interior(r1, r2)
    if lefts is None or rights is None:
        return None
    return cls(lefts[0], rights[0]), cls(lefts[1], rights[1])


def meet_types(g1: SType, g2: SType) -> Optional[SType]:
    """Precision meet: the most imprecise type below both, if any."""
    if isinstance(g1, RecVar) or isinstance(g2, RecVar):
        if isinstance(g1, RecVar) and isinstance(g2, RecVar) and g1.name == g2.name:
            return g1
        return None
    effect = g1.eff.meet(g2.eff)
    ty = _meet_type(g1.ty, g2.ty)
    if effect is None or ty is None:
        return None
    return SensType(ty, effect)


def _meet_type(t1: Type, t2: Type) -> Optional[Type]:
    if isinstance(t1, BaseType) and isinstance(t2, BaseType):
        return t1 if t1.kind is t2.kind else None
    if isinstance(t1, ArrowType) and isinstance(t2, ArrowType):
        d, c = meet_types(t1.dom, t2.dom), meet_types(t1.cod, t2.cod)
        return None if d is None or c is None else ArrowType(d, c)
    if isinstance(t1, ForallType) and isinstance(t2, ForallType):
        var, (b1, b2) = align_resources([(t1.resource, t1.body), (t2.resource, t2.body)])
        body = meet_types(b1, b2)
        return None if body is None else ForallType(var, body)
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        lft, rgt = meet_types(t1.left, t2.left), meet_types(t1.right, t2.right)
        return None if lft is None or rgt is None else ProdType(lft, rgt)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        lft, rgt = meet_types(t1.left, t2.left), meet_types(t1.right, t2.right)
        return None if lft is None or rgt is None else SumType(lft, rgt)
    if isinstance(t1, ListType) and isinstance(t2, ListType):
        item = meet_types(t1.elem, t2.elem)
        return None if item is None else ListType(item)
    if isinstance(t1, RecType) and isinstance(t2, RecType):
        var, (b1, b2) = align_recvars([(t1.var, t1.body), (t2.var, t2.body)])
        body = meet_types(b1, b2)
        return None if body is None else RecType(var, body)
    return None


def _ctrans_sens(
    a: GradualSens, b: GradualSens, c: GradualSens, d: GradualSens
) -> Optional[tuple[GradualSens, GradualSens]]:
    hi = min(a.hi, b.hi, c.hi)
    lo = max(b.lo, c.lo, d.lo)
    if a.lo > hi or lo > d.hi:
        return None
    return GradualSens(a.lo, hi), GradualSens(lo, d.hi)


def _ctrans_env(
    a: SensEnv, b: SensEnv, c: SensEnv, d: SensEnv
) -> Optional[tuple[SensEnv, SensEnv]]:
    lhs: list[tuple[ResourceVar, GradualSens]] = []
    rhs: list[tuple[ResourceVar, GradualSens]] = []
    for resource in a.resources() | b.resources() | c.resources() | d.resources():
        pair = _ctrans_sens(a.get(resource), b.get(resource), c.get(resource), d.get(resource))
        if pair is None:
            return None
        lhs.append((resource, pair[0]))
        rhs.append((resource, pair[1]))
    return SensEnv(tuple(lhs)), SensEnv(tuple(rhs))


def ctrans(e1: Evidence, e2: Evidence) -> Optional[Evidence]:
    """``e1 ∘ e2``; ``None`` means the transitive judgment is refuted."""
    pair = _ctrans(e1.lhs, e1.rhs, e2.lhs, e2.rhs)
    return None if pair is None else Evidence(*pair)


def _ctrans(a: SType, b: SType, c: SType, d: SType) -> Optional[Pair]:
    if any(isinstance(g, RecVar) for g in (a, b, c, d)):
        names = {g.name if isinstance(g, RecVar) else None for g in (a, b, c, d)}
        return (a, d) if len(names) == 1 and None not in names else None
    assert isinstance(a, SensType) and isinstance(b, SensType)
    assert isinstance(c, SensType) and isinstance(d, SensType)
    effects = _ctrans_env(a.eff, b.eff, c.eff, d.eff)
    if effects is None:
        return None
    types = _ctrans_type(a.ty, b.ty, c.ty, d.ty)
    if types is None:
        return None
    return SensType(types[0], effects[0]), SensType(types[1], effects[1])


def _ctrans_type(a: Type, b: Type, c: Type, d: Type) -> Optional[TypePair]:
    kinds = {type(a), type(b), type(c), type(d)}
    if len(kinds) != 1:
        return None
    if isinstance(a, BaseType):
        kinds_of_base = {t.kind for t in (a, b, c, d)}  # type: ignore[union-attr]
        return (a, d) if len(kinds_of_base) == 1 else None
    if isinstance(a, ArrowType):
        assert isinstance(b, ArrowType) and isinstance(c, ArrowType) and isinstance(d, ArrowType)
        doms = _ctrans(d.dom, c.dom, b.dom, a.dom)
        cods = _ctrans(a.cod, b.cod, c.cod, d.cod)
        if doms is None or cods is None:
            return None
        return ArrowType(doms[1], cods[0]), ArrowType(doms[0], cods[1])
    if isinstance(a, ForallType):
        var, bodies = align_resources(
            [(t.resource, t.body) for t in (a, b, c, d)]  # type: ignore[union-attr]
        )
        pair = _ctrans(*bodies)
        return None if pair is None else (ForallType(var, pair[0]), ForallType(var, pair[1]))
    if isinstance(a, (ProdType, SumType)):
        cls = type(a)
        lefts = _ctrans(*(t.left for t in (a, b, c, d)))  # type: ignore[union-attr]
        rights = _ctrans(*(t.right for t in (a, b, c, d)))  # type: ignore[union-attr]
        if lefts is None or rights is None:
            return None
        return cls(lefts[0], rights[0]), cls(lefts[1], rights[1])
    if isinstance(a, ListType):
        items = _ctrans(*(t.elem for t in (a, b, c, d)))  # type: ignore[union-attr]
        return None if items is None else (ListType(items[0]), ListType(items[1]))
    if isinstance(a, RecType):
        var, bodies = align_recvars(
            [(t.var, t.body) for t in (a, b, c, d)]  # type: ignore[union-attr]
        )
        positive = all(
            weakly_positive(var, Polarity.POSITIVE, bodies[0], other) for other in bodies[1:]
        )
        if positive:
            pair = _ctrans(*bodies)
            return None if pair is None else (RecType(var, pair[0]), RecType(var, pair[1]))
        equal: Optional[SType] = bodies[0]
        for other in bodies[1:]:
            equal = None if equal is None else meet_types(equal, other)
        return None if equal is None else (RecType(var, equal), RecType(var, equal))
    return None


def ev_invert(
    kind: Projection, evidence: Evidence, replacement: Optional[SensEnv] = None
) -> Evidence:
    """Project an evidence the way the matching type meta-function projects a type."""
    if kind is Projection.DOM:
        lhs, rhs = projections.dom(evidence.rhs), projections.dom(evidence.lhs)
    elif kind is Projection.INST:
        if replacement is None:
            raise EvidenceInvariantError("inst inversion requires an effect")
        lhs = projections.inst(evidence.lhs, replacement)
        rhs = projections.inst(evidence.rhs, replacement)
    elif kind is Projection.EFF:
        raise EvidenceInvariantError("use Evidence.effects() for eff²")
    else:
        project = projections.stype_project
        lhs_p, rhs_p = project(kind, evidence.lhs), project(kind, evidence.rhs)
        lhs = lhs_p if not isinstance(lhs_p, SensEnv) else None
        rhs = rhs_p if not isinstance(rhs_p, SensEnv) else None
    if lhs is None or rhs is None:
        raise EvidenceInvariantError(f"cannot take '{kind.value}' of evidence {evidence}")
    return Evidence(lhs, rhs)


def ev_join_effect(evidence: Evidence, effects: tuple[SensEnv, SensEnv]) -> Evidence:
    """``ε ⊔² eff²(ε′)``: join the components' top-level effects."""
    lhs, rhs = join_effect(evidence.lhs, effects[0]), join_effect(evidence.rhs, effects[1])
    if lhs is None or rhs is None:
        raise EvidenceInvariantError(f"cannot join effects into evidence {evidence}")
    return Evidence(lhs, rhs)


def ev_add_effect(evidence: Evidence, effects: tuple[SensEnv, SensEnv]) -> Evidence:
    lhs, rhs = add_effect(evidence.lhs, effects[0]), add_effect(evidence.rhs, effects[1])
    if lhs is None or rhs is None:
        raise EvidenceInvariantError(f"cannot add effects into evidence {evidence}")
    return Evidence(lhs, rhs)
