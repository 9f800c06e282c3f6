"""Surface syntax tree produced by the parser and consumed by the desugarer.

Type annotations are stored as :mod:`gradual_sensitivity.models.types` values
(resource names are :class:`ResourceVar`). Every node carries a source span.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from gradual_sensitivity.enums import PrimOp
from gradual_sensitivity.models.sensitivity import SensEnv
from gradual_sensitivity.models.types import SType
from gradual_sensitivity.syntax.tokens import NO_SPAN, Span


@dataclass(frozen=True, slots=True)
class NumLit:
    value: float
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class BoolLit:
    value: bool
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class UnitLit:
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class PrimApp:
    op: PrimOp
    args: tuple["Expr", ...]
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Lambda:
    param: str
    param_type: SType
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ResLambda:
    resource: str
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Call:
    """``f(a1, …, an)``; resource binders of ``f`` are instantiated from the arguments."""

    fn: "Expr"
    args: tuple["Expr", ...]
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ResApp:
    fn: "Expr"
    effect: SensEnv
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Ascribe:
    expr: "Expr"
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Pair:
    left: "Expr"
    right: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Fst:
    expr: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Snd:
    expr: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Inl:
    expr: "Expr"
    other: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Inr:
    expr: "Expr"
    other: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Case:
    scrutinee: "Expr"
    left_var: str
    left_body: "Expr"
    right_var: str
    right_body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Fold:
    stype: SType
    expr: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Unfold:
    expr: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Fix:
    name: str
    stype: SType
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class If:
    cond: "Expr"
    then: "Expr"
    otherwise: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class TryCatch:
    body: "Expr"
    handler: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Let:
    name: str
    annotation: Optional[SType]
    value: "Expr"
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class LetRes:
    name: str
    value: "Expr"
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ListLit:
    elems: tuple["Expr", ...]
    elem_type: Optional[SType] = None
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class IndexOf:
    lst: "Expr"
    pred: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Length:
    lst: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Get:
    lst: "Expr"
    index: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Laplace:
    value: "Expr"
    scale: float
    eps: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Param:
    name: str
    stype: SType
    is_res: bool = False
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class DefDecl:
    name: str
    resources: tuple[str, ...]
    params: tuple[Param, ...]
    ret: Optional[SType]
    body: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class LetDecl:
    name: str
    annotation: Optional[SType]
    value: "Expr"
    is_res: bool = False
    span: Span = NO_SPAN


Decl = Union[DefDecl, LetDecl]


@dataclass(frozen=True, slots=True)
class Block:
    decls: tuple[Decl, ...]
    result: "Expr"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Program:
    decls: tuple[Decl, ...]
    result: Optional["Expr"]
    span: Span = NO_SPAN


Expr = Union[
    NumLit, BoolLit, UnitLit, Var, PrimApp, Lambda, ResLambda, Call, ResApp, Ascribe,
    Pair, Fst, Snd, Inl, Inr, Case, Fold, Unfold, Fix, If, TryCatch, Let, LetRes,
    ListLit, IndexOf, Length, Get, Laplace, Block,
]
