"""Static and dynamic gradual guarantees under random annotation widening.

A widening replaces some sensitivity intervals written in ascriptions,
``fold``/``inl``/``inr`` targets, ``let`` annotations, empty-list element
types and lambda or ``def`` parameter types by larger intervals; at least one
interval strictly grows. The type of a ``res`` parameter mentions its own
resource and is left alone. The widened program must still typecheck at a
less precise type and, when the original run produced a value, produce a less
precise value. Runs that recover from a failure in a ``try`` handler carry no
obligation: a widened program may pass the check the original failed.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace
from typing import Callable, Optional, Sequence, get_args

import numpy as np

from gradual_sensitivity.calculus.precision import ev_precision, st_precision
from gradual_sensitivity.checker.elaborator import elaborate
from gradual_sensitivity.enums import GuaranteeKind, OutcomeKind
from gradual_sensitivity.errors import SensitivityTypeError
from gradual_sensitivity.harness.generators import can_widen, widen_type, widen_type_strictly
from gradual_sensitivity.harness.inputs import DEFAULT_RANGE, single_inputs
from gradual_sensitivity.harness.runner import draw_seed, run_trials
from gradual_sensitivity.harness.specs import MPSpec, PreparedSpec, Range, prepare
from gradual_sensitivity.machine import DEFAULT_STEP_BUDGET, evaluate
from gradual_sensitivity.machine.reference import same_payload
from gradual_sensitivity.models.results import GGCounterexample, GGReport
from gradual_sensitivity.models.sensitivity import ResourceVar
from gradual_sensitivity.models.types import SType, free_resources
from gradual_sensitivity.models.values import (
    ClosureV,
    FoldV,
    InlV,
    InrV,
    ListV,
    PairV,
    Payload,
    ResAbsV,
    Value,
)
from gradual_sensitivity.syntax import ast
from gradual_sensitivity.syntax.printer import pretty

logger = logging.getLogger(__name__)

_EXPR_NODES = get_args(ast.Expr)

WIDENED_FIELDS: dict[type, str] = {
    ast.Ascribe: "stype",
    ast.Fold: "stype",
    ast.Inl: "other",
    ast.Inr: "other",
    ast.Lambda: "param_type",
    ast.Let: "annotation",
    ast.ListLit: "elem_type",
}


def _is_res_param(expr: ast.Expr) -> bool:
    return isinstance(expr, ast.Lambda) and ResourceVar(expr.param) in free_resources(
        expr.param_type
    )


def _map_annotations(expr: ast.Expr, visit: Callable[[SType], SType]) -> ast.Expr:
    """Rebuild ``expr`` bottom-up, passing every widenable annotation through ``visit``."""
    changes: dict[str, object] = {}
    for spec in fields(expr):
        value = getattr(expr, spec.name)
        if isinstance(value, _EXPR_NODES):
            changes[spec.name] = _map_annotations(value, visit)
        elif isinstance(value, tuple) and any(isinstance(item, _EXPR_NODES) for item in value):
            changes[spec.name] = tuple(_map_annotations(item, visit) for item in value)
    attribute = WIDENED_FIELDS.get(type(expr))
    if attribute is not None and not _is_res_param(expr):
        annotation = getattr(expr, attribute)
        if annotation is not None and can_widen(annotation):
            changes[attribute] = visit(annotation)
    return replace(expr, **changes) if changes else expr  # type: ignore[arg-type]


def widening_sites(expr: ast.Expr) -> int:
    count = 0

    def tally(stype: SType) -> SType:
        nonlocal count
        count += 1
        return stype

    _map_annotations(expr, tally)
    return count


def widen_program(expr: ast.Expr, rng: np.random.Generator, *, rate: float = 0.5) -> ast.Expr:
    """A less precise copy of ``expr``; unchanged when it has no widenable annotation."""
    sites = widening_sites(expr)
    if not sites:
        return expr
    forced = int(rng.integers(0, sites))
    position = 0

    def widen(stype: SType) -> SType:
        nonlocal position
        current, position = position, position + 1
        if current == forced:
            return widen_type_strictly(stype, rng)
        return widen_type(stype, rng) if rng.random() < rate else stype

    return _map_annotations(expr, widen)


def value_precision(precise: Value, imprecise: Value) -> bool:
    """``v₁ ⊑ v₂``: equal payloads with componentwise more precise evidence and types."""
    if not ev_precision(precise.evidence, imprecise.evidence):
        return False
    if not st_precision(precise.stype, imprecise.stype):
        return False
    return _payload_precision(precise.payload, imprecise.payload)


def _payload_precision(first: Payload, second: Payload) -> bool:
    if isinstance(first, (ClosureV, ResAbsV)):
        return type(first) is type(second)
    if isinstance(first, PairV) and isinstance(second, PairV):
        return value_precision(first.left, second.left) and value_precision(
            first.right, second.right
        )
    if isinstance(first, (InlV, InrV, FoldV)) and type(first) is type(second):
        return value_precision(first.value, second.value)  # type: ignore[union-attr]
    if isinstance(first, ListV) and isinstance(second, ListV):
        return len(first.items) == len(second.items) and all(
            value_precision(a, b) for a, b in zip(first.items, second.items)
        )
    return same_payload(first, second)


@dataclass(frozen=True)
class _Outcome:
    checked: bool
    counterexample: Optional[GGCounterexample] = None


@dataclass
class GradualGuarantee:
    kind: GuaranteeKind
    programs: Sequence[PreparedSpec]
    seed: int
    step_budget: int = DEFAULT_STEP_BUDGET
    value_range: Range = DEFAULT_RANGE
    workers: int = 1

    def run(self, widenings: int) -> GGReport:
        eligible = [p for p in self.programs if widening_sites(p.compiled.expr)]
        report = GGReport(self.kind, programs=len(self.programs))
        if not eligible:
            logger.warning("No program has an annotation to widen")
            return report
        logger.info(
            "Checking the %s gradual guarantee: %d widenings over %d programs",
            self.kind.value,
            widenings,
            len(eligible),
        )

        def trial(index: int, rng: np.random.Generator) -> _Outcome:
            return self._trial(eligible[index % len(eligible)], rng)

        for outcome in run_trials(trial, widenings, self.seed, workers=self.workers):
            report.widenings += 1
            report.checked += int(outcome.checked)
            if outcome.counterexample is not None:
                report.counterexamples.append(outcome.counterexample)
        logger.info(
            "%s guarantee: %d checked, %d counterexamples",
            self.kind.value,
            report.checked,
            len(report.counterexamples),
        )
        return report

    def _trial(self, prepared: PreparedSpec, rng: np.random.Generator) -> _Outcome:
        original = prepared.compiled
        widened = widen_program(original.expr, rng)

        def refuted(reason: str) -> _Outcome:
            logger.debug("%s: %s", prepared.name, reason)
            return _Outcome(True, GGCounterexample(pretty(original.expr), pretty(widened), reason))

        try:
            term, stype = elaborate(widened, prepared.type_env)
        except SensitivityTypeError as exc:
            return refuted(f"widened program no longer typechecks: {exc}")
        if not st_precision(original.stype, stype):
            return refuted(f"type {original.stype} is not more precise than {stype}")
        if self.kind is GuaranteeKind.STATIC:
            return _Outcome(True)

        env = single_inputs(prepared, rng, self.value_range)
        noise_seed = draw_seed(rng)
        before = evaluate(
            original.term, seed=noise_seed, budget=self.step_budget, env=env, trace=True
        )
        after = evaluate(term, seed=noise_seed, budget=self.step_budget, env=env)
        if OutcomeKind.BUDGET_EXHAUSTED in (before.kind, after.kind):
            return _Outcome(False)
        if any(event.rule == "r-catch" for event in before.trace):
            return _Outcome(False)
        if before.value is None:
            return _Outcome(True)
        if after.value is None:
            return refuted(f"value {before.value.payload} became {after.failure}")
        if not value_precision(before.value, after.value):
            return refuted(f"value {before.value} is not more precise than {after.value}")
        return _Outcome(True)


def gg_fuzz(
    kind: GuaranteeKind,
    corpus: Sequence[MPSpec],
    widenings: int,
    seed: int,
    *,
    step_budget: int = DEFAULT_STEP_BUDGET,
    value_range: Range = DEFAULT_RANGE,
    workers: int = 1,
) -> GGReport:
    """Widen annotations across ``corpus`` programs and check the chosen guarantee."""
    programs = [prepare(spec, base_result=False) for spec in corpus]
    return GradualGuarantee(
        kind, programs, seed, step_budget=step_budget, value_range=value_range, workers=workers
    ).run(widenings)
