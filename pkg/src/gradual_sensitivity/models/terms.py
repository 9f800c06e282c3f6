"""Evidence-augmented core terms produced by the elaborator.

Introduction forms (constants, lambdas, resource abstractions, pairs,
injections, folds and lists) only ever appear as the direct body of an
:class:`Ascr`; the evaluator turns the pair into a value ``ε u :: G``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from gradual_sensitivity.enums import PrimOp
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv
from gradual_sensitivity.models.types import SType
from gradual_sensitivity.syntax.tokens import NO_SPAN, Span

if TYPE_CHECKING:  # pragma: no cover - hints only
    from gradual_sensitivity.models.values import Value

Constant = Union[float, bool, None]


@dataclass(frozen=True, slots=True)
class Const:
    value: Constant
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Lam:
    param: str
    param_type: SType
    body: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ResLam:
    resource: ResourceVar
    body: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Op:
    op: PrimOp
    args: tuple["Term", ...]
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ResApp:
    fn: "Term"
    effect: SensEnv
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Ascr:
    """``ε t :: G``."""

    evidence: Evidence
    term: "Term"
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class PairT:
    left: "Term"
    right: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class FstT:
    term: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class SndT:
    term: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class InlT:
    term: "Term"
    other: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class InrT:
    term: "Term"
    other: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class CaseT:
    scrutinee: "Term"
    left_var: str
    left_body: "Term"
    right_var: str
    right_body: "Term"
    left_type: SType
    right_type: SType
    join_type: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class FoldT:
    stype: SType
    term: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class UnfoldT:
    term: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class FixT:
    name: str
    stype: SType
    body: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class IfT:
    cond: "Term"
    then: "Term"
    otherwise: "Term"
    then_type: SType
    else_type: SType
    join_type: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class TryT:
    body: "Term"
    handler: "Term"
    body_evidence: Evidence
    handler_evidence: Evidence
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class ListT:
    elems: tuple["Term", ...]
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class IndexOfT:
    lst: "Term"
    pred: "Term"
    elem_evidence: Evidence
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class LengthT:
    lst: "Term"
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class GetT:
    lst: "Term"
    index: "Term"
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class LaplaceT:
    value: "Term"
    scale: float
    eps: "Term"
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class Val:
    """A runtime value spliced into a term by substitution."""

    value: "Value"
    span: Span = NO_SPAN


Term = Union[
    Const, Lam, ResLam, Var, Op, App, ResApp, Ascr, PairT, FstT, SndT, InlT, InrT, CaseT,
    FoldT, UnfoldT, FixT, IfT, TryT, ListT, IndexOfT, LengthT, GetT, LaplaceT, Val,
]

INTRODUCTION_FORMS = (Const, Lam, ResLam, PairT, InlT, InrT, FoldT, ListT)


def node_name(term: Term) -> str:
    return type(term).__name__
