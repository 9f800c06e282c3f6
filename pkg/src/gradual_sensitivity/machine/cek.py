"""CEK machine for evidence-augmented core terms.

The control is a term under an environment, a finished value, or a bare
payload waiting for the ascription that introduces it. Continuations are an
explicit list of frames, so deep recursion in object programs never grows
the Python stack.

Example:

    from gradual_sensitivity.checker import compile_source
    from gradual_sensitivity.machine.cek import evaluate

    result = evaluate(compile_source("1 + 2").term, seed=7)
    result.value.constant  # 3.0
"""
from __future__ import annotations

import logging
import math
from typing import List, Optional

from gradual_sensitivity.calculus import projections
from gradual_sensitivity.calculus.evidence_ops import (
    ctrans,
    ev_add_effect,
    ev_invert,
    ev_join_effect,
    interior,
)
from gradual_sensitivity.calculus.precision import st_precision
from gradual_sensitivity.calculus.primitives import apply_prim, iop_evidence, iop_type
from gradual_sensitivity.enums import OutcomeKind, PrimOp, Projection, RuntimeErrorKind
from gradual_sensitivity.errors import EvidenceInvariantError, ParameterError
from gradual_sensitivity.machine import frames as fr
from gradual_sensitivity.machine.noise import LaplaceNoise, NoiseSource
from gradual_sensitivity.machine.substitution import value_subst_resource
from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.results import RunResult, RuntimeFailure, TraceEvent
from gradual_sensitivity.models.sensitivity import (
    EMPTY_ENV,
    INFINITE,
    FreshNames,
    SensEnv,
    format_sens,
)
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

DEFAULT_STEP_BUDGET = 10_000_000

Effects = tuple[SensEnv, SensEnv]


def _scaled(effects: Effects) -> Effects:
    return effects[0].scale(INFINITE), effects[1].scale(INFINITE)


class Machine:
    """One evaluation of a closed core term.

    ``step`` performs a single transition and returns the final
    :class:`RunResult` once the machine has stopped (``None`` before that).
    """

    def __init__(
        self,
        term: terms.Term,
        env: Optional[Env] = None,
        *,
        noise: Optional[NoiseSource] = None,
        seed: Optional[int] = None,
        budget: int = DEFAULT_STEP_BUDGET,
        trace: bool = False,
        audit: bool = False,
    ) -> None:
        self._control: fr.Control = fr.Eval(term, env if env is not None else Env.empty())
        self._stack: List[fr.Frame] = []
        self._noise: NoiseSource = noise if noise is not None else LaplaceNoise(seed)
        self._tracing = trace
        self._audit = audit
        self._result: Optional[RunResult] = None
        self._names = FreshNames()
        self.budget = budget
        self.steps = 0
        self.trace: List[TraceEvent] = []

    @property
    def result(self) -> Optional[RunResult]:
        return self._result

    def step(self) -> Optional[RunResult]:
        if self._result is not None:
            return self._result
        control = self._control
        if isinstance(control, fr.Return) and not self._stack:
            self._finish(RunResult(OutcomeKind.VALUE, value=control.value))
            return self._result
        if self.steps >= self.budget:
            self._finish(RunResult(OutcomeKind.BUDGET_EXHAUSTED))
            return self._result
        self.steps += 1
        if isinstance(control, fr.Eval):
            self._eval(control.term, control.env)
        elif isinstance(control, fr.Return):
            self._resume(self._stack.pop(), control.value)
        else:
            self._wrap(control.payload)
        return self._result

    def run(self) -> RunResult:
        result = self._result
        while result is None:
            result = self.step()
        return result

    # -- bookkeeping --------------------------------------------------------

    def _finish(self, result: RunResult) -> None:
        result.steps = self.steps
        result.trace = self.trace
        self._result = result

    def _record(self, rule: str, redex: str, evidence: Optional[Evidence] = None) -> None:
        if self._tracing:
            self.trace.append(TraceEvent(self.steps, rule, redex, evidence))

    def _return(self, value: Value) -> None:
        if self._audit and not st_precision(value.evidence.rhs, value.stype):
            raise EvidenceInvariantError(
                f"evidence {value.evidence} is not tighter than the ascribed type {value.stype}"
            )
        self._control = fr.Return(value)

    def _fail(self, failure: RuntimeFailure) -> None:
        if failure.kind.catchable:
            while self._stack:
                frame = self._stack.pop()
                if isinstance(frame, fr.TryFrame):
                    logger.debug("try caught %s", failure)
                    self._record("r-catch", failure.kind.value)
                    node = frame.node
                    self._stack.append(fr.AscrFrame(node.handler_evidence, node.stype, node.span))
                    self._control = fr.Eval(node.handler, frame.env)
                    return
        self._stack.clear()
        self._finish(RunResult(OutcomeKind.ERROR, failure=failure))

    def _violation(self, value: Value, evidence: Evidence, stype: SType, span: Span) -> None:
        self._fail(
            RuntimeFailure(
                RuntimeErrorKind.SENSITIVITY_VIOLATION,
                f"cannot ascribe {value.payload} to {stype}",
                (value.evidence, evidence),
                span,
            )
        )

    def _user_error(self, message: str, span: Span) -> None:
        self._fail(RuntimeFailure(RuntimeErrorKind.USER_ERROR, message, span=span))

    def _coerce(
        self, value: Value, evidence: Evidence, stype: Optional[SType], span: Span
    ) -> Optional[Value]:
        """Ascribe in place; a refuted combination raises the failure and returns ``None``."""
        if stype is None:
            raise EvidenceInvariantError(f"no target type to ascribe {value.payload} to", span=span)
        combined = ctrans(value.evidence, evidence)
        self._record("r-ascr", f"{value.payload} :: {stype}", combined)
        if combined is None:
            self._violation(value, evidence, stype, span)
            return None
        return Value(combined, value.payload, stype)

    # -- evaluation ---------------------------------------------------------

    def _eval(self, term: terms.Term, env: Env) -> None:
        push = self._stack.append
        if isinstance(term, terms.Val):
            self._control = fr.Return(term.value)
        elif isinstance(term, terms.Var):
            binding = env.lookup(term.name)
            if binding is None:
                raise EvidenceInvariantError(f"unbound variable '{term.name}'", span=term.span)
            if isinstance(binding, Thunk):
                self._control = fr.Eval(binding.term, binding.env)
            else:
                self._control = fr.Return(binding)
        elif isinstance(term, terms.Ascr):
            push(fr.AscrFrame(term.evidence, term.stype, term.span))
            if isinstance(term.term, terms.INTRODUCTION_FORMS):
                self._introduce(term.term, env)
            else:
                self._control = fr.Eval(term.term, env)
        elif isinstance(term, terms.Op):
            push(fr.OpFrame(term.op, (), term.args[1:], env, term.span))
            self._control = fr.Eval(term.args[0], env)
        elif isinstance(term, terms.App):
            push(fr.AppFnFrame(term.arg, env))
            self._control = fr.Eval(term.fn, env)
        elif isinstance(term, terms.ResApp):
            push(fr.ResAppFrame(term.effect))
            self._control = fr.Eval(term.fn, env)
        elif isinstance(term, (terms.FstT, terms.SndT, terms.UnfoldT)):
            push(fr.ProjectFrame(term))
            self._control = fr.Eval(term.term, env)
        elif isinstance(term, terms.CaseT):
            push(fr.CaseFrame(term, env))
            self._control = fr.Eval(term.scrutinee, env)
        elif isinstance(term, terms.IfT):
            push(fr.IfFrame(term, env))
            self._control = fr.Eval(term.cond, env)
        elif isinstance(term, terms.TryT):
            push(fr.TryFrame(term, env))
            push(fr.AscrFrame(term.body_evidence, term.stype, term.span))
            self._control = fr.Eval(term.body, env)
        elif isinstance(term, terms.FixT):
            unrolled = terms.Ascr(Evidence(term.stype, term.stype), term, term.stype, term.span)
            self._record("r-fix", term.name)
            self._control = fr.Eval(term.body, env.extend(term.name, Thunk(unrolled, env)))
        elif isinstance(term, terms.LengthT):
            push(fr.LengthFrame(term))
            self._control = fr.Eval(term.lst, env)
        elif isinstance(term, terms.GetT):
            push(fr.GetListFrame(term, env))
            self._control = fr.Eval(term.lst, env)
        elif isinstance(term, terms.IndexOfT):
            push(fr.IndexOfListFrame(term, env))
            self._control = fr.Eval(term.lst, env)
        elif isinstance(term, terms.LaplaceT):
            push(fr.LaplaceValueFrame(term, env))
            self._control = fr.Eval(term.value, env)
        else:
            raise EvidenceInvariantError(
                f"unascribed {terms.node_name(term)} reached the machine", span=term.span
            )

    def _introduce(self, form: terms.Term, env: Env) -> None:
        push = self._stack.append
        if isinstance(form, terms.Const):
            self._control = fr.ReturnPayload(ConstV(form.value))
        elif isinstance(form, terms.Lam):
            self._control = fr.ReturnPayload(ClosureV(form.param, form.param_type, form.body, env))
        elif isinstance(form, terms.ResLam):
            push(fr.ResLamFrame(form.resource))
            self._control = fr.Eval(form.body, env)
        elif isinstance(form, terms.PairT):
            push(fr.PairLeftFrame(form.right, env))
            self._control = fr.Eval(form.left, env)
        elif isinstance(form, (terms.InlT, terms.InrT)):
            push(fr.InjectFrame(isinstance(form, terms.InlT)))
            self._control = fr.Eval(form.term, env)
        elif isinstance(form, terms.FoldT):
            push(fr.FoldFrame())
            self._control = fr.Eval(form.term, env)
        elif isinstance(form, terms.ListT):
            if not form.elems:
                self._control = fr.ReturnPayload(ListV(()))
            else:
                push(fr.ListFrame((), form.elems[1:], env))
                self._control = fr.Eval(form.elems[0], env)
        else:
            raise EvidenceInvariantError(f"{terms.node_name(form)} is not an introduction form")

    def _wrap(self, payload: Payload) -> None:
        frame = self._stack.pop() if self._stack else None
        if not isinstance(frame, fr.AscrFrame):
            raise EvidenceInvariantError(f"payload {payload} has no introducing ascription")
        self._return(Value(frame.evidence, payload, frame.stype))

    # -- continuations ------------------------------------------------------

    def _resume(self, frame: fr.Frame, value: Value) -> None:
        push = self._stack.append
        if isinstance(frame, fr.AscrFrame):
            ascribed = self._coerce(value, frame.evidence, frame.stype, frame.span)
            if ascribed is not None:
                self._return(ascribed)
        elif isinstance(frame, fr.OpFrame):
            done = frame.done + (value,)
            if frame.pending:
                push(fr.OpFrame(frame.op, done, frame.pending[1:], frame.env, frame.span))
                self._control = fr.Eval(frame.pending[0], frame.env)
            else:
                self._apply_op(frame.op, done, frame.span)
        elif isinstance(frame, fr.AppFnFrame):
            push(fr.AppArgFrame(value))
            self._control = fr.Eval(frame.arg, frame.env)
        elif isinstance(frame, fr.AppArgFrame):
            self._apply(frame.fn, value, NO_SPAN)
        elif isinstance(frame, fr.ResAppFrame):
            self._instantiate(value, frame.effect)
        elif isinstance(frame, fr.ResLamFrame):
            self._control = fr.ReturnPayload(ResAbsV(frame.resource, value))
        elif isinstance(frame, fr.PairLeftFrame):
            push(fr.PairRightFrame(value))
            self._control = fr.Eval(frame.right, frame.env)
        elif isinstance(frame, fr.PairRightFrame):
            self._control = fr.ReturnPayload(PairV(frame.left, value))
        elif isinstance(frame, fr.InjectFrame):
            self._control = fr.ReturnPayload(InlV(value) if frame.left else InrV(value))
        elif isinstance(frame, fr.FoldFrame):
            self._control = fr.ReturnPayload(FoldV(value))
        elif isinstance(frame, fr.ListFrame):
            done = frame.done + (value,)
            if frame.pending:
                push(fr.ListFrame(done, frame.pending[1:], frame.env))
                self._control = fr.Eval(frame.pending[0], frame.env)
            else:
                self._control = fr.ReturnPayload(ListV(done))
        elif isinstance(frame, fr.ProjectFrame):
            self._project(frame.node, value)
        elif isinstance(frame, fr.CaseFrame):
            self._case(frame.node, frame.env, value)
        elif isinstance(frame, fr.IfFrame):
            node = frame.node
            chosen = value.constant is True
            self._enter_branch(
                node.join_type,
                node.then_type if chosen else node.else_type,
                value,
                node.then if chosen else node.otherwise,
                frame.env,
                "r-if",
                node.span,
            )
        elif isinstance(frame, fr.TryFrame):
            self._control = fr.Return(value)
        elif isinstance(frame, fr.LengthFrame):
            items = self._items(value)
            lhs, rhs = _scaled(value.evidence.effects())
            evidence = Evidence(real(lhs), real(rhs))
            self._record("r-length", str(value.payload), evidence)
            self._return(Value(evidence, ConstV(float(len(items))), frame.node.stype))
        elif isinstance(frame, fr.GetListFrame):
            push(fr.GetIndexFrame(frame.node, value))
            self._control = fr.Eval(frame.node.index, frame.env)
        elif isinstance(frame, fr.GetIndexFrame):
            self._get(frame.node, frame.lst, value)
        elif isinstance(frame, fr.IndexOfListFrame):
            push(fr.IndexOfPredFrame(frame.node, value))
            self._control = fr.Eval(frame.node.pred, frame.env)
        elif isinstance(frame, fr.IndexOfPredFrame):
            self._scan(frame.node, frame.lst, value, 0, (EMPTY_ENV, EMPTY_ENV))
        elif isinstance(frame, fr.IndexOfScanFrame):
            lhs, rhs = value.evidence.effects()
            answers = (frame.answers[0].join(lhs), frame.answers[1].join(rhs))
            if value.constant is True:
                self._found(frame.node, frame.lst, frame.pred, frame.position, answers)
            else:
                self._scan(frame.node, frame.lst, frame.pred, frame.position + 1, answers)
        elif isinstance(frame, fr.LaplaceValueFrame):
            push(fr.LaplaceEpsFrame(frame.node, value))
            self._control = fr.Eval(frame.node.eps, frame.env)
        else:
            self._laplace(frame.node, frame.value, value)

    def _apply_op(self, op: PrimOp, args: tuple[Value, ...], span: Span) -> None:
        stype = iop_type(op, [arg.stype for arg in args])
        try:
            evidence = iop_evidence(op, [arg.evidence for arg in args])
        except ValueError as exc:
            raise EvidenceInvariantError(str(exc), span=span) from exc
        if stype is None:
            raise EvidenceInvariantError(f"operator '{op.value}' applied to ill-typed values")
        if len(args) == 1:
            redex = f"{op.value} {args[0].payload}"
        else:
            redex = f"{args[0].payload} {op.value} {args[1].payload}"
        self._record("r-op", redex, evidence)
        try:
            result = apply_prim(op, [arg.constant for arg in args])
        except ZeroDivisionError:
            self._fail(RuntimeFailure(RuntimeErrorKind.DIVISION_BY_ZERO, redex, span=span))
            return
        self._return(Value(evidence, ConstV(result), stype))

    def _apply(self, fn: Value, arg: Value, span: Span) -> None:
        closure = fn.payload
        if not isinstance(closure, ClosureV):
            raise EvidenceInvariantError(f"cannot apply {closure}")
        result_type = projections.cod(fn.stype)
        if result_type is None:
            raise EvidenceInvariantError(f"applied value has non-function type {fn.stype}")
        domain = ev_invert(Projection.DOM, fn.evidence)
        combined = ctrans(arg.evidence, domain)
        self._record("r-app", f"{closure} {arg.payload}", combined)
        if combined is None:
            self._violation(arg, domain, closure.param_type, span)
            return
        self._stack.append(fr.AscrFrame(ev_invert(Projection.COD, fn.evidence), result_type, span))
        bound = Value(combined, arg.payload, closure.param_type)
        self._control = fr.Eval(closure.body, closure.env.extend(closure.param, bound))

    def _instantiate(self, value: Value, effect: SensEnv) -> None:
        abstraction = value.payload
        if not isinstance(abstraction, ResAbsV):
            raise EvidenceInvariantError(f"cannot instantiate {abstraction}")
        target = projections.inst(value.stype, effect)
        if target is None:
            raise EvidenceInvariantError(f"cannot instantiate type {value.stype}")
        evidence = ev_invert(Projection.INST, value.evidence, effect)
        self._record("r-inst", f"{abstraction} [{effect}]", evidence)
        body = value_subst_resource(
            abstraction.body, abstraction.resource, effect, self._names
        )
        self._stack.append(fr.AscrFrame(evidence, target))
        self._control = fr.Return(body)

    def _project(self, node: terms.Term, value: Value) -> None:
        payload = value.payload
        if isinstance(node, terms.FstT) and isinstance(payload, PairV):
            kind, component, target, rule = (
                Projection.FIRST, payload.left, projections.first(value.stype), "r-fst"
            )
        elif isinstance(node, terms.SndT) and isinstance(payload, PairV):
            kind, component, target, rule = (
                Projection.SECOND, payload.right, projections.second(value.stype), "r-snd"
            )
        elif isinstance(node, terms.UnfoldT) and isinstance(payload, FoldV):
            kind, component, target, rule = (
                Projection.UNF, payload.value, projections.unf(value.stype), "r-unfold"
            )
        else:
            raise EvidenceInvariantError(f"{terms.node_name(node)} applied to {payload}")
        if target is None:
            raise EvidenceInvariantError(f"cannot project type {value.stype}")
        evidence = ev_invert(kind, value.evidence)
        self._record(rule, str(payload), evidence)
        self._stack.append(fr.AscrFrame(evidence, target, node.span))
        self._control = fr.Return(component)

    def _case(self, node: terms.CaseT, env: Env, value: Value) -> None:
        payload = value.payload
        if isinstance(payload, InlV):
            bound = self._coerce(
                payload.value,
                ev_invert(Projection.LEFT, value.evidence),
                projections.left(value.stype),
                node.span,
            )
            var, body, branch_type = node.left_var, node.left_body, node.left_type
        elif isinstance(payload, InrV):
            bound = self._coerce(
                payload.value,
                ev_invert(Projection.RIGHT, value.evidence),
                projections.right(value.stype),
                node.span,
            )
            var, body, branch_type = node.right_var, node.right_body, node.right_type
        else:
            raise EvidenceInvariantError(f"case on non-sum value {payload}")
        if bound is None:
            return
        self._enter_branch(
            node.join_type, branch_type, value, body, env.extend(var, bound), "r-case", node.span
        )

    def _enter_branch(
        self,
        join: SType,
        branch_type: SType,
        scrutinee: Value,
        body: terms.Term,
        env: Env,
        rule: str,
        span: Span,
    ) -> None:
        base = interior(branch_type, join)
        scrutinee_effect = projections.eff(scrutinee.stype)
        target = join_effect(join, scrutinee_effect) if scrutinee_effect is not None else None
        if base is None or target is None:
            raise EvidenceInvariantError(f"branch type {branch_type} does not fit {join}")
        evidence = ev_join_effect(base, scrutinee.evidence.effects())
        self._record(rule, str(scrutinee.payload), evidence)
        self._stack.append(fr.AscrFrame(evidence, target, span))
        self._control = fr.Eval(body, env)

    @staticmethod
    def _items(value: Value) -> tuple[Value, ...]:
        if not isinstance(value.payload, ListV):
            raise EvidenceInvariantError(f"expected a list, found {value.payload}")
        return value.payload.items

    def _get(self, node: terms.GetT, lst: Value, index: Value) -> None:
        items = self._items(lst)
        raw = index.constant
        if (
            isinstance(raw, bool)
            or not isinstance(raw, (int, float))
            or not float(raw).is_integer()
            or not 0 <= raw < len(items)
        ):
            self._user_error(
                f"index {ConstV(raw)} out of range for a list of length {len(items)}", node.span
            )
            return
        item = self._coerce(
            items[int(raw)],
            ev_invert(Projection.ELEM, lst.evidence),
            projections.elem(lst.stype),
            node.span,
        )
        if item is None:
            return
        evidence = ev_add_effect(item.evidence, _scaled(index.evidence.effects()))
        self._record("r-get", f"{lst.payload}[{index.payload}]", evidence)
        self._return(Value(evidence, item.payload, node.stype))

    def _scan(
        self, node: terms.IndexOfT, lst: Value, pred: Value, position: int, answers: Effects
    ) -> None:
        items = self._items(lst)
        if position >= len(items):
            self._found(node, lst, pred, -1, answers)
            return
        item = self._coerce(
            items[position],
            ev_invert(Projection.ELEM, lst.evidence),
            projections.elem(lst.stype),
            node.span,
        )
        if item is None:
            return
        arg = self._coerce(item, node.elem_evidence, projections.dom(pred.stype), node.span)
        if arg is None:
            return
        self._stack.append(fr.IndexOfScanFrame(node, lst, pred, position, answers))
        self._apply(pred, arg, node.span)

    def _found(
        self, node: terms.IndexOfT, lst: Value, pred: Value, index: int, answers: Effects
    ) -> None:
        (list_lhs, list_rhs), (pred_lhs, pred_rhs) = lst.evidence.effects(), pred.evidence.effects()
        lhs, rhs = _scaled(
            (list_lhs.add(pred_lhs).add(answers[0]), list_rhs.add(pred_rhs).add(answers[1]))
        )
        evidence = Evidence(real(lhs), real(rhs))
        self._record("r-indexOf", str(lst.payload), evidence)
        self._return(Value(evidence, ConstV(float(index)), node.stype))

    def _laplace(self, node: terms.LaplaceT, value: Value, eps_value: Value) -> None:
        eps = eps_value.constant
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 < eps < math.inf:
            self._user_error(
                f"laplace needs a positive finite eps, got {eps_value.payload}", node.span
            )
            return
        x = value.constant
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise EvidenceInvariantError(f"laplace applied to {value.payload}", span=node.span)
        try:
            noise = self._noise.sample(node.scale / eps)
        except ParameterError as exc:
            self._user_error(exc.message, node.span)
            return
        evidence = Evidence(real(), real())
        self._record(
            "r-laplace",
            f"laplace({value.payload}, {format_sens(node.scale)}, {eps_value.payload})",
            evidence,
        )
        self._return(Value(evidence, ConstV(float(x) + noise), real()))


def evaluate(
    term: terms.Term,
    *,
    seed: Optional[int] = None,
    budget: int = DEFAULT_STEP_BUDGET,
    trace: bool = False,
    env: Optional[Env] = None,
    noise: Optional[NoiseSource] = None,
    audit: bool = False,
) -> RunResult:
    """Run ``term`` to a value, a runtime failure or budget exhaustion."""
    result = Machine(
        term, env, noise=noise, seed=seed, budget=budget, trace=trace, audit=audit
    ).run()
    logger.debug("evaluation finished: %s after %d steps", result.kind.value, result.steps)
    return result
