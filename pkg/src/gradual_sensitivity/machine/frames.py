"""Control states and continuation frames of the CEK machine.

Each frame is one evaluation-context production: it remembers what is left
to do once the value in its hole is known.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from gradual_sensitivity.enums import PrimOp
from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv
from gradual_sensitivity.models.types import SType
from gradual_sensitivity.models.values import Env, Payload, Value
from gradual_sensitivity.syntax.tokens import NO_SPAN, Span


@dataclass(frozen=True, slots=True)
class Eval:
    term: terms.Term
    env: Env


@dataclass(frozen=True, slots=True)
class Return:
    value: Value


@dataclass(frozen=True, slots=True)
class ReturnPayload:
    """An introduction form finished building; the enclosing ascription wraps it."""

    payload: Payload


Control = Union[Eval, Return, ReturnPayload]


@dataclass(frozen=True, slots=True)
class AscrFrame:
    evidence: Evidence
    stype: SType
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class OpFrame:
    op: PrimOp
    done: tuple[Value, ...]
    pending: tuple[terms.Term, ...]
    env: Env
    span: Span = NO_SPAN


@dataclass(frozen=True, slots=True)
class AppFnFrame:
    arg: terms.Term
    env: Env


@dataclass(frozen=True, slots=True)
class AppArgFrame:
    fn: Value


@dataclass(frozen=True, slots=True)
class ResAppFrame:
    effect: SensEnv


@dataclass(frozen=True, slots=True)
class ResLamFrame:
    resource: ResourceVar


@dataclass(frozen=True, slots=True)
class PairLeftFrame:
    right: terms.Term
    env: Env


@dataclass(frozen=True, slots=True)
class PairRightFrame:
    left: Value


@dataclass(frozen=True, slots=True)
class InjectFrame:
    left: bool


@dataclass(frozen=True, slots=True)
class FoldFrame:
    pass


@dataclass(frozen=True, slots=True)
class ListFrame:
    done: tuple[Value, ...]
    pending: tuple[terms.Term, ...]
    env: Env


@dataclass(frozen=True, slots=True)
class ProjectFrame:
    """``fst``, ``snd`` and ``unfold`` waiting for their operand."""

    node: Union[terms.FstT, terms.SndT, terms.UnfoldT]


@dataclass(frozen=True, slots=True)
class CaseFrame:
    node: terms.CaseT
    env: Env


@dataclass(frozen=True, slots=True)
class IfFrame:
    node: terms.IfT
    env: Env


@dataclass(frozen=True, slots=True)
class TryFrame:
    node: terms.TryT
    env: Env


@dataclass(frozen=True, slots=True)
class LengthFrame:
    node: terms.LengthT


@dataclass(frozen=True, slots=True)
class GetListFrame:
    node: terms.GetT
    env: Env


@dataclass(frozen=True, slots=True)
class GetIndexFrame:
    node: terms.GetT
    lst: Value


@dataclass(frozen=True, slots=True)
class IndexOfListFrame:
    node: terms.IndexOfT
    env: Env


@dataclass(frozen=True, slots=True)
class IndexOfPredFrame:
    node: terms.IndexOfT
    lst: Value


@dataclass(frozen=True, slots=True)
class IndexOfScanFrame:
    """Waiting for the predicate's answer on item ``position``."""

    node: terms.IndexOfT
    lst: Value
    pred: Value
    position: int
    # eff² of the predicate answers seen so far, joined
    answers: tuple[SensEnv, SensEnv]


@dataclass(frozen=True, slots=True)
class LaplaceValueFrame:
    node: terms.LaplaceT
    env: Env


@dataclass(frozen=True, slots=True)
class LaplaceEpsFrame:
    node: terms.LaplaceT
    value: Value


Frame = Union[
    AscrFrame, OpFrame, AppFnFrame, AppArgFrame, ResAppFrame, ResLamFrame, PairLeftFrame,
    PairRightFrame, InjectFrame, FoldFrame, ListFrame, ProjectFrame, CaseFrame, IfFrame,
    TryFrame, LengthFrame, GetListFrame, GetIndexFrame, IndexOfListFrame, IndexOfPredFrame,
    IndexOfScanFrame, LaplaceValueFrame, LaplaceEpsFrame,
]
