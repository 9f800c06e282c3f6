"""Big-step evaluator by textual substitution.

Used as the oracle for the environment-based machine: both must agree on
every closed, well-typed program. Closures produced here carry an empty
environment because their bodies are closed by the time they are built.
"""
from __future__ import annotations

import logging
import math
from typing import Optional

from gradual_sensitivity.calculus import projections
from gradual_sensitivity.calculus.evidence_ops import (
    ctrans,
    ev_add_effect,
    ev_invert,
    ev_join_effect,
    interior,
)
from gradual_sensitivity.calculus.precision import alpha_equal
from gradual_sensitivity.calculus.primitives import apply_prim, iop_evidence, iop_type
from gradual_sensitivity.enums import OutcomeKind, Projection, RuntimeErrorKind
from gradual_sensitivity.errors import EvidenceInvariantError, ParameterError
from gradual_sensitivity.machine.cek import DEFAULT_STEP_BUDGET
from gradual_sensitivity.machine.noise import LaplaceNoise, NoiseSource
from gradual_sensitivity.machine.substitution import term_subst_var, value_subst_resource
from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.results import RunResult, RuntimeFailure
from gradual_sensitivity.models.sensitivity import EMPTY_ENV, INFINITE, FreshNames, SensEnv
from gradual_sensitivity.models.types import SType, join_effect, real
from gradual_sensitivity.models.values import (
    ClosureV,
    ConstV,
    Env,
    FoldV,
    InlV,
    InrV,
    ListV,
    PairV,
    Payload,
    ResAbsV,
    Thunk,
    Value,
)
from gradual_sensitivity.syntax.tokens import NO_SPAN, Span

logger = logging.getLogger(__name__)


class _Failed(Exception):
    def __init__(self, failure: RuntimeFailure) -> None:
        super().__init__(str(failure))
        self.failure = failure


class _OutOfSteps(Exception):
    pass


def _violation(value: Value, evidence: Evidence, stype: SType, span: Span) -> _Failed:
    return _Failed(
        RuntimeFailure(
            RuntimeErrorKind.SENSITIVITY_VIOLATION,
            f"cannot ascribe {value.payload} to {stype}",
            (value.evidence, evidence),
            span,
        )
    )


def _user_error(message: str, span: Span) -> _Failed:
    return _Failed(RuntimeFailure(RuntimeErrorKind.USER_ERROR, message, span=span))


def _infinitely(effects: tuple[SensEnv, SensEnv]) -> tuple[SensEnv, SensEnv]:
    return effects[0].scale(INFINITE), effects[1].scale(INFINITE)


class ReferenceEvaluator:
    def __init__(
        self, *, noise: Optional[NoiseSource] = None, seed: Optional[int] = None,
        budget: int = DEFAULT_STEP_BUDGET,
    ) -> None:
        self._noise: NoiseSource = noise if noise is not None else LaplaceNoise(seed)
        self.budget = budget
        self.steps = 0
        self._names = FreshNames()

    def run(self, term: terms.Term, env: Optional[Env] = None) -> RunResult:
        for name, binding in env or Env.empty():
            if isinstance(binding, Thunk):
                raise EvidenceInvariantError("the reference evaluator takes value inputs only")
            term = term_subst_var(term, name, terms.Val(binding))
        try:
            value = self._eval(term)
        except _Failed as failed:
            return RunResult(OutcomeKind.ERROR, failure=failed.failure, steps=self.steps)
        except (_OutOfSteps, RecursionError):
            return RunResult(OutcomeKind.BUDGET_EXHAUSTED, steps=self.steps)
        return RunResult(OutcomeKind.VALUE, value=value, steps=self.steps)

    def _coerce(
        self, value: Value, evidence: Evidence, stype: Optional[SType], span: Span = NO_SPAN
    ) -> Value:
        if stype is None:
            raise EvidenceInvariantError(f"no target type to ascribe {value.payload} to")
        combined = ctrans(value.evidence, evidence)
        if combined is None:
            raise _violation(value, evidence, stype, span)
        return Value(combined, value.payload, stype)

    def _eval(self, term: terms.Term) -> Value:
        self.steps += 1
        if self.steps > self.budget:
            raise _OutOfSteps()
        if isinstance(term, terms.Val):
            return term.value
        if isinstance(term, terms.Ascr):
            if isinstance(term.term, terms.INTRODUCTION_FORMS):
                return Value(term.evidence, self._introduce(term.term), term.stype)
            return self._coerce(self._eval(term.term), term.evidence, term.stype, term.span)
        if isinstance(term, terms.Op):
            args = [self._eval(arg) for arg in term.args]
            stype = iop_type(term.op, [arg.stype for arg in args])
            if stype is None:
                raise EvidenceInvariantError(f"operator '{term.op.value}' on ill-typed values")
            evidence = iop_evidence(term.op, [arg.evidence for arg in args])
            try:
                result = apply_prim(term.op, [arg.constant for arg in args])
            except ZeroDivisionError:
                raise _Failed(
                    RuntimeFailure(
                        RuntimeErrorKind.DIVISION_BY_ZERO, "division by zero", span=term.span
                    )
                ) from None
            return Value(evidence, ConstV(result), stype)
        if isinstance(term, terms.App):
            fn = self._eval(term.fn)
            return self._apply(fn, self._eval(term.arg), term.span)
        if isinstance(term, terms.ResApp):
            fn = self._eval(term.fn)
            abstraction = fn.payload
            if not isinstance(abstraction, ResAbsV):
                raise EvidenceInvariantError(f"cannot instantiate {abstraction}")
            body = value_subst_resource(
                abstraction.body, abstraction.resource, term.effect, self._names
            )
            return self._coerce(
                body,
                ev_invert(Projection.INST, fn.evidence, term.effect),
                projections.inst(fn.stype, term.effect),
                term.span,
            )
        if isinstance(term, (terms.FstT, terms.SndT, terms.UnfoldT)):
            return self._project(term, self._eval(term.term))
        if isinstance(term, terms.CaseT):
            return self._case(term, self._eval(term.scrutinee))
        if isinstance(term, terms.IfT):
            cond = self._eval(term.cond)
            chosen = cond.constant is True
            return self._branch(
                term.join_type,
                term.then_type if chosen else term.else_type,
                cond,
                term.then if chosen else term.otherwise,
                term.span,
            )
        if isinstance(term, terms.TryT):
            try:
                body = self._eval(term.body)
                return self._coerce(body, term.body_evidence, term.stype, term.span)
            except _Failed as failed:
                if not failed.failure.kind.catchable:
                    raise
                logger.debug("try caught %s", failed.failure)
            return self._coerce(
                self._eval(term.handler), term.handler_evidence, term.stype, term.span
            )
        if isinstance(term, terms.FixT):
            unrolled = terms.Ascr(Evidence(term.stype, term.stype), term, term.stype, term.span)
            return self._eval(term_subst_var(term.body, term.name, unrolled))
        if isinstance(term, terms.LengthT):
            lst = self._eval(term.lst)
            lhs, rhs = _infinitely(lst.evidence.effects())
            return Value(
                Evidence(real(lhs), real(rhs)), ConstV(float(len(_items(lst)))), term.stype
            )
        if isinstance(term, terms.GetT):
            return self._get(term, self._eval(term.lst), self._eval(term.index))
        if isinstance(term, terms.IndexOfT):
            return self._index_of(term, self._eval(term.lst), self._eval(term.pred))
        if isinstance(term, terms.LaplaceT):
            return self._laplace(term, self._eval(term.value), self._eval(term.eps))
        raise EvidenceInvariantError(f"cannot evaluate open or bare {terms.node_name(term)}")

    def _introduce(self, form: terms.Term) -> Payload:
        if isinstance(form, terms.Const):
            return ConstV(form.value)
        if isinstance(form, terms.Lam):
            return ClosureV(form.param, form.param_type, form.body, Env.empty())
        if isinstance(form, terms.ResLam):
            return ResAbsV(form.resource, self._eval(form.body))
        if isinstance(form, terms.PairT):
            left = self._eval(form.left)
            return PairV(left, self._eval(form.right))
        if isinstance(form, terms.InlT):
            return InlV(self._eval(form.term))
        if isinstance(form, terms.InrT):
            return InrV(self._eval(form.term))
        if isinstance(form, terms.FoldT):
            return FoldV(self._eval(form.term))
        if isinstance(form, terms.ListT):
            return ListV(tuple(self._eval(elem) for elem in form.elems))
        raise EvidenceInvariantError(f"{terms.node_name(form)} is not an introduction form")

    def _apply(self, fn: Value, arg: Value, span: Span) -> Value:
        closure = fn.payload
        if not isinstance(closure, ClosureV):
            raise EvidenceInvariantError(f"cannot apply {closure}")
        domain = ev_invert(Projection.DOM, fn.evidence)
        combined = ctrans(arg.evidence, domain)
        if combined is None:
            raise _violation(arg, domain, closure.param_type, span)
        bound = Value(combined, arg.payload, closure.param_type)
        result = self._eval(term_subst_var(closure.body, closure.param, terms.Val(bound)))
        return self._coerce(
            result, ev_invert(Projection.COD, fn.evidence), projections.cod(fn.stype), span
        )

    def _project(self, node: terms.Term, value: Value) -> Value:
        payload = value.payload
        if isinstance(node, terms.FstT) and isinstance(payload, PairV):
            return self._coerce(
                payload.left,
                ev_invert(Projection.FIRST, value.evidence),
                projections.first(value.stype),
            )
        if isinstance(node, terms.SndT) and isinstance(payload, PairV):
            return self._coerce(
                payload.right,
                ev_invert(Projection.SECOND, value.evidence),
                projections.second(value.stype),
            )
        if isinstance(node, terms.UnfoldT) and isinstance(payload, FoldV):
            evidence = ev_invert(Projection.UNF, value.evidence)
            return self._coerce(payload.value, evidence, projections.unf(value.stype))
        raise EvidenceInvariantError(f"{terms.node_name(node)} applied to {payload}")

    def _case(self, node: terms.CaseT, value: Value) -> Value:
        payload = value.payload
        if isinstance(payload, InlV):
            bound = self._coerce(
                payload.value,
                ev_invert(Projection.LEFT, value.evidence),
                projections.left(value.stype),
                node.span,
            )
            body = term_subst_var(node.left_body, node.left_var, terms.Val(bound))
            return self._branch(node.join_type, node.left_type, value, body, node.span)
        if isinstance(payload, InrV):
            bound = self._coerce(
                payload.value,
                ev_invert(Projection.RIGHT, value.evidence),
                projections.right(value.stype),
                node.span,
            )
            body = term_subst_var(node.right_body, node.right_var, terms.Val(bound))
            return self._branch(node.join_type, node.right_type, value, body, node.span)
        raise EvidenceInvariantError(f"case on non-sum value {payload}")

    def _branch(
        self, join: SType, branch_type: SType, scrutinee: Value, body: terms.Term, span: Span
    ) -> Value:
        base = interior(branch_type, join)
        scrutinee_effect = projections.eff(scrutinee.stype)
        target = join_effect(join, scrutinee_effect) if scrutinee_effect is not None else None
        if base is None or target is None:
            raise EvidenceInvariantError(f"branch type {branch_type} does not fit {join}")
        evidence = ev_join_effect(base, scrutinee.evidence.effects())
        return self._coerce(self._eval(body), evidence, target, span)

    def _get(self, node: terms.GetT, lst: Value, index: Value) -> Value:
        items = _items(lst)
        raw = index.constant
        if (
            isinstance(raw, bool)
            or not isinstance(raw, (int, float))
            or not float(raw).is_integer()
            or not 0 <= raw < len(items)
        ):
            raise _user_error(
                f"index {ConstV(raw)} out of range for a list of length {len(items)}", node.span
            )
        item = self._coerce(
            items[int(raw)], ev_invert(Projection.ELEM, lst.evidence), projections.elem(lst.stype)
        )
        evidence = ev_add_effect(item.evidence, _infinitely(index.evidence.effects()))
        return Value(evidence, item.payload, node.stype)

    def _index_of(self, node: terms.IndexOfT, lst: Value, pred: Value) -> Value:
        answers = (EMPTY_ENV, EMPTY_ENV)
        found = -1
        for position, raw in enumerate(_items(lst)):
            elem_evidence = ev_invert(Projection.ELEM, lst.evidence)
            item = self._coerce(raw, elem_evidence, projections.elem(lst.stype), node.span)
            arg = self._coerce(item, node.elem_evidence, projections.dom(pred.stype), node.span)
            answer = self._apply(pred, arg, node.span)
            lhs, rhs = answer.evidence.effects()
            answers = (answers[0].join(lhs), answers[1].join(rhs))
            if answer.constant is True:
                found = position
                break
        (list_lhs, list_rhs), (pred_lhs, pred_rhs) = lst.evidence.effects(), pred.evidence.effects()
        lhs, rhs = _infinitely(
            (list_lhs.add(pred_lhs).add(answers[0]), list_rhs.add(pred_rhs).add(answers[1]))
        )
        return Value(Evidence(real(lhs), real(rhs)), ConstV(float(found)), node.stype)

    def _laplace(self, node: terms.LaplaceT, value: Value, eps_value: Value) -> Value:
        eps = eps_value.constant
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 < eps < math.inf:
            raise _user_error(
                f"laplace needs a positive finite eps, got {eps_value.payload}", node.span
            )
        x = value.constant
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise EvidenceInvariantError(f"laplace applied to {value.payload}", span=node.span)
        try:
            noise = self._noise.sample(node.scale / eps)
        except ParameterError as exc:
            raise _user_error(exc.message, node.span) from exc
        return Value(Evidence(real(), real()), ConstV(float(x) + noise), real())


def _items(value: Value) -> tuple[Value, ...]:
    if not isinstance(value.payload, ListV):
        raise EvidenceInvariantError(f"expected a list, found {value.payload}")
    return value.payload.items


def reference_evaluate(
    term: terms.Term,
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_STEP_BUDGET,
    env: Optional[Env] = None,
    noise: Optional[NoiseSource] = None,
) -> RunResult:
    return ReferenceEvaluator(noise=noise, seed=seed, budget=budget).run(term, env)


def same_payload(p1: Payload, p2: Payload) -> bool:
    """Structural payload equality; functions only compare by kind."""
    if isinstance(p1, ConstV) and isinstance(p2, ConstV):
        return p1.value == p2.value and type(p1.value) is type(p2.value)
    if isinstance(p1, ClosureV) and isinstance(p2, ClosureV):
        return True
    if isinstance(p1, ResAbsV) and isinstance(p2, ResAbsV):
        return True
    if isinstance(p1, PairV) and isinstance(p2, PairV):
        return same_payload(p1.left.payload, p2.left.payload) and same_payload(
            p1.right.payload, p2.right.payload
        )
    if isinstance(p1, (InlV, InrV, FoldV)) and type(p1) is type(p2):
        return same_payload(p1.value.payload, p2.value.payload)  # type: ignore[union-attr]
    if isinstance(p1, ListV) and isinstance(p2, ListV):
        return len(p1.items) == len(p2.items) and all(
            same_payload(a.payload, b.payload) for a, b in zip(p1.items, p2.items)
        )
    return False


def agree(first: RunResult, second: RunResult) -> bool:
    """Whether two runs of the same program tell the same story.

    A run that ran out of steps is inconclusive and agrees with anything.
    """
    if OutcomeKind.BUDGET_EXHAUSTED in (first.kind, second.kind):
        return True
    if first.kind is not second.kind:
        return False
    if first.kind is OutcomeKind.ERROR:
        assert first.failure is not None and second.failure is not None
        return first.failure.kind is second.failure.kind
    assert first.value is not None and second.value is not None
    v1, v2 = first.value, second.value
    return (
        same_payload(v1.payload, v2.payload)
        and alpha_equal(v1.stype, v2.stype)
        and alpha_equal(v1.evidence.lhs, v2.evidence.lhs)
        and alpha_equal(v1.evidence.rhs, v2.evidence.rhs)
    )
