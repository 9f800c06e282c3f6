"""Type-and-effect syntax: ``G ::= ⟨ty;Σ⟩ | α``.

Example:

    from gradual_sensitivity.models.types import ArrowType, SensType, real
    from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv

    r = ResourceVar("r")
    double = SensType(ArrowType(real(SensEnv.single(r)), real(SensEnv.single(r, 2))))
    str(double)  # "Number[r] -> Number[2r]"
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Callable, Optional, Union

from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.models.sensitivity import (
    EMPTY_ENV,
    GradualSens,
    ResourceVar,
    SensEnv,
    fresh_resource,
)


@dataclass(frozen=True, slots=True)
class BaseType:
    kind: BaseKind

    def __str__(self) -> str:
        return self.kind.value


@dataclass(frozen=True, slots=True)
class ArrowType:
    dom: "SType"
    cod: "SType"

    def __str__(self) -> str:
        return f"{_operand(self.dom)} -> {self.cod}"


@dataclass(frozen=True, slots=True)
class ForallType:
    resource: ResourceVar
    body: "SType"

    def __str__(self) -> str:
        return f"forall {self.resource}. {self.body}"


@dataclass(frozen=True, slots=True)
class ProdType:
    left: "SType"
    right: "SType"

    def __str__(self) -> str:
        return f"({self.left}, {self.right})"


@dataclass(frozen=True, slots=True)
class SumType:
    left: "SType"
    right: "SType"

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True, slots=True)
class RecType:
    var: str
    body: "SType"

    def __str__(self) -> str:
        return f"mu {self.var}. {self.body}"


@dataclass(frozen=True, slots=True)
class ListType:
    elem: "SType"

    def __str__(self) -> str:
        return f"List<{self.elem}>"


Type = Union[BaseType, ArrowType, ForallType, ProdType, SumType, RecType, ListType]

# Constructors whose rendering extends to the right and needs parentheses
# before an effect suffix or an arrow.
_OPEN_ENDED = (ArrowType, ForallType, RecType)


@dataclass(frozen=True, slots=True)
class SensType:
    ty: Type
    eff: SensEnv = EMPTY_ENV

    def __str__(self) -> str:
        if self.eff.is_empty:
            return str(self.ty)
        if isinstance(self.ty, _OPEN_ENDED):
            return f"({self.ty})[{self.eff}]"
        return f"{self.ty}[{self.eff}]"


@dataclass(frozen=True, slots=True)
class RecVar:
    name: str

    def __str__(self) -> str:
        return self.name


SType = Union[SensType, RecVar]
EffectMap = Callable[[SensEnv], SensEnv]


def _operand(stype: SType) -> str:
    if isinstance(stype, SensType) and stype.eff.is_empty and isinstance(stype.ty, _OPEN_ENDED):
        return f"({stype})"
    return str(stype)


REAL = BaseType(BaseKind.REAL)
BOOL = BaseType(BaseKind.BOOL)
UNIT = BaseType(BaseKind.UNIT)


def real(eff: SensEnv = EMPTY_ENV) -> SensType:
    return SensType(REAL, eff)


def boolean(eff: SensEnv = EMPTY_ENV) -> SensType:
    return SensType(BOOL, eff)


def unit(eff: SensEnv = EMPTY_ENV) -> SensType:
    return SensType(UNIT, eff)


def arrow(dom: SType, cod: SType, eff: SensEnv = EMPTY_ENV) -> SensType:
    return SensType(ArrowType(dom, cod), eff)


def effect_of(stype: SType) -> Optional[SensEnv]:
    return stype.eff if isinstance(stype, SensType) else None


def add_effect(stype: SType, extra: SensEnv) -> Optional[SType]:
    """``G + Σ``; undefined on a bare recursive variable unless ``Σ`` is empty."""
    if extra.is_empty:
        return stype
    if isinstance(stype, RecVar):
        return None
    return SensType(stype.ty, stype.eff.add(extra))


def join_effect(stype: SType, extra: SensEnv) -> Optional[SType]:
    """``G ⊔ Σ`` on the top-level effect."""
    if extra.is_empty:
        return stype
    if isinstance(stype, RecVar):
        return None
    return SensType(stype.ty, stype.eff.join(extra))


def is_base(stype: SType, kind: Optional[BaseKind] = None) -> bool:
    if not isinstance(stype, SensType) or not isinstance(stype.ty, BaseType):
        return False
    return kind is None or stype.ty.kind is kind


def free_resources(stype: SType) -> frozenset[ResourceVar]:
    if isinstance(stype, RecVar):
        return frozenset()
    return stype.eff.resources() | _type_resources(stype.ty)


def _type_resources(ty: Type) -> frozenset[ResourceVar]:
    if isinstance(ty, BaseType):
        return frozenset()
    if isinstance(ty, ArrowType):
        return free_resources(ty.dom) | free_resources(ty.cod)
    if isinstance(ty, ForallType):
        return free_resources(ty.body) - {ty.resource}
    if isinstance(ty, (ProdType, SumType)):
        return free_resources(ty.left) | free_resources(ty.right)
    if isinstance(ty, RecType):
        return free_resources(ty.body)
    return free_resources(ty.elem)


def free_recvars(stype: SType) -> frozenset[str]:
    if isinstance(stype, RecVar):
        return frozenset({stype.name})
    ty = stype.ty
    if isinstance(ty, BaseType):
        return frozenset()
    if isinstance(ty, ArrowType):
        return free_recvars(ty.dom) | free_recvars(ty.cod)
    if isinstance(ty, ForallType):
        return free_recvars(ty.body)
    if isinstance(ty, (ProdType, SumType)):
        return free_recvars(ty.left) | free_recvars(ty.right)
    if isinstance(ty, RecType):
        return free_recvars(ty.body) - {ty.var}
    return free_recvars(ty.elem)


def subst_resource(stype: SType, resource: ResourceVar, replacement: SensEnv) -> SType:
    """Capture-avoiding ``[replacement/resource]stype``."""
    if isinstance(stype, RecVar):
        return stype
    return SensType(
        _subst_resource_type(stype.ty, resource, replacement),
        stype.eff.subst(resource, replacement),
    )


def _subst_resource_type(ty: Type, resource: ResourceVar, replacement: SensEnv) -> Type:
    if isinstance(ty, BaseType):
        return ty
    if isinstance(ty, ArrowType):
        return ArrowType(
            subst_resource(ty.dom, resource, replacement),
            subst_resource(ty.cod, resource, replacement),
        )
    if isinstance(ty, ForallType):
        if ty.resource == resource:
            return ty
        binder, body = ty.resource, ty.body
        if binder in replacement.resources():
            renamed = fresh_resource(
                binder.name, replacement.resources() | free_resources(body) | {resource}
            )
            body = subst_resource(body, binder, SensEnv.single(renamed))
            binder = renamed
        return ForallType(binder, subst_resource(body, resource, replacement))
    if isinstance(ty, ProdType):
        return ProdType(
            subst_resource(ty.left, resource, replacement),
            subst_resource(ty.right, resource, replacement),
        )
    if isinstance(ty, SumType):
        return SumType(
            subst_resource(ty.left, resource, replacement),
            subst_resource(ty.right, resource, replacement),
        )
    if isinstance(ty, RecType):
        return RecType(ty.var, subst_resource(ty.body, resource, replacement))
    return ListType(subst_resource(ty.elem, resource, replacement))


def fresh_recvar(hint: str, avoid: AbstractSet[str]) -> str:
    base = hint.split("~", 1)[0]
    index = 1
    while f"{base}~{index}" in avoid:
        index += 1
    return f"{base}~{index}"


def subst_recvar(stype: SType, var: str, replacement: SType) -> SType:
    """Capture-avoiding ``[replacement/var]stype``.

    The top-level effect of ``stype`` is kept when ``var`` itself is replaced,
    which only happens for a bare :class:`RecVar`.
    """
    if isinstance(stype, RecVar):
        return replacement if stype.name == var else stype
    ty = stype.ty
    if isinstance(ty, BaseType):
        return stype
    if isinstance(ty, ArrowType):
        new_ty: Type = ArrowType(
            subst_recvar(ty.dom, var, replacement), subst_recvar(ty.cod, var, replacement)
        )
    elif isinstance(ty, ForallType):
        new_ty = ForallType(ty.resource, subst_recvar(ty.body, var, replacement))
    elif isinstance(ty, ProdType):
        new_ty = ProdType(
            subst_recvar(ty.left, var, replacement), subst_recvar(ty.right, var, replacement)
        )
    elif isinstance(ty, SumType):
        new_ty = SumType(
            subst_recvar(ty.left, var, replacement), subst_recvar(ty.right, var, replacement)
        )
    elif isinstance(ty, RecType):
        if ty.var == var:
            return stype
        binder, body = ty.var, ty.body
        if binder in free_recvars(replacement):
            renamed = fresh_recvar(binder, free_recvars(replacement) | free_recvars(body) | {var})
            body = subst_recvar(body, binder, RecVar(renamed))
            binder = renamed
        new_ty = RecType(binder, subst_recvar(body, var, replacement))
    else:
        new_ty = ListType(subst_recvar(ty.elem, var, replacement))
    return SensType(new_ty, stype.eff)


def rename_resource(stype: SType, old: ResourceVar, new: ResourceVar) -> SType:
    return subst_resource(stype, old, SensEnv.single(new, GradualSens.exact(1)))


def map_effects(stype: SType, fn: EffectMap) -> SType:
    """Apply ``fn`` to every effect in ``stype`` (used by annotation widening)."""
    if isinstance(stype, RecVar):
        return stype
    ty = stype.ty
    if isinstance(ty, ArrowType):
        new_ty: Type = ArrowType(map_effects(ty.dom, fn), map_effects(ty.cod, fn))
    elif isinstance(ty, ForallType):
        new_ty = ForallType(ty.resource, map_effects(ty.body, fn))
    elif isinstance(ty, ProdType):
        new_ty = ProdType(map_effects(ty.left, fn), map_effects(ty.right, fn))
    elif isinstance(ty, SumType):
        new_ty = SumType(map_effects(ty.left, fn), map_effects(ty.right, fn))
    elif isinstance(ty, RecType):
        new_ty = RecType(ty.var, map_effects(ty.body, fn))
    elif isinstance(ty, ListType):
        new_ty = ListType(map_effects(ty.elem, fn))
    else:
        new_ty = ty
    return SensType(new_ty, fn(stype.eff))


def effects_of(stype: SType) -> list[SensEnv]:
    """Every effect occurring in ``stype``, innermost first."""
    found: list[SensEnv] = []

    def collect(eff: SensEnv) -> SensEnv:
        found.append(eff)
        return eff

    map_effects(stype, collect)
    return found
