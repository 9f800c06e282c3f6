"""Randomised refutation of gradual metric preservation.

For every generated pair of neighbouring inputs the program runs twice with
the same noise seed. When both runs produce values, their distance must stay
within ``upper(Σ)·Δ`` and each value's monitored sensitivity must lie inside
its ascribed effect. Pairs where a run fails count as error pairs. The
termination-sensitive variant also requires both runs to end the same way.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from gradual_sensitivity.enums import OutcomeKind
from gradual_sensitivity.errors import HarnessError
from gradual_sensitivity.harness.distance import distance
from gradual_sensitivity.harness.inputs import (
    DEFAULT_RANGE,
    DEFAULT_TOLERANCE,
    InputPair,
    neighbor_pair,
)
from gradual_sensitivity.harness.runner import draw_seed, run_trials
from gradual_sensitivity.harness.specs import MPSpec, PreparedSpec, Range, prepare
from gradual_sensitivity.machine import DEFAULT_STEP_BUDGET, evaluate
from gradual_sensitivity.models.results import MPReport, MPViolation, RunResult
from gradual_sensitivity.models.types import effect_of
from gradual_sensitivity.models.values import Value, mon, msens

logger = logging.getLogger(__name__)

SpecLike = Union[MPSpec, PreparedSpec]


def adequate(value: Value) -> bool:
    """``msens(mon(v))`` lies within the effect ``v`` is ascribed at."""
    effect = effect_of(value.stype)
    if effect is None:
        return True
    return msens(mon(value)).embed().precise_than(effect)


def _describe(result: RunResult) -> str:
    if result.value is not None:
        return str(result.value.payload)
    if result.failure is not None:
        return result.failure.kind.value
    return result.kind.value


def _terminates(result: RunResult) -> bool:
    return result.kind is OutcomeKind.VALUE


@dataclass
class MetricPreservation:
    prepared: PreparedSpec
    seed: int
    termination_sensitive: bool = False
    step_budget: int = DEFAULT_STEP_BUDGET
    value_range: Range = DEFAULT_RANGE
    tolerance: float = DEFAULT_TOLERANCE
    workers: int = 1

    def __post_init__(self) -> None:
        if self.termination_sensitive and not self.prepared.bounded():
            raise HarnessError(
                f"{self.prepared.name}: termination-sensitive checking needs bounded "
                f"sensitivities, but the claimed effect, delta or an annotation is unbounded"
            )

    @property
    def bound(self) -> float:
        return self.prepared.claimed.upper().dot(self.prepared.delta)

    def run(self, pairs: int) -> MPReport:
        logger.info(
            "Checking %s on %d pairs (bound %s, %s)",
            self.prepared.name,
            pairs,
            self.bound,
            "ts-mp" if self.termination_sensitive else "mp",
        )
        report = MPReport(self.prepared.name, termination_sensitive=self.termination_sensitive)
        for trial in run_trials(self._trial, pairs, self.seed, workers=self.workers):
            report.merge(trial)
        logger.info(
            "%s: %d trials, %d successes, %d error pairs, %d violations",
            report.name,
            report.trials,
            report.successes,
            report.error_pairs,
            len(report.violations),
        )
        return report

    def _trial(self, index: int, rng: np.random.Generator) -> MPReport:
        pair = neighbor_pair(self.prepared, rng, self.value_range, self.tolerance)
        noise_seed = draw_seed(rng)
        first_env, second_env = pair.envs()
        term = self.prepared.compiled.term
        first = evaluate(term, seed=noise_seed, budget=self.step_budget, env=first_env)
        second = evaluate(term, seed=noise_seed, budget=self.step_budget, env=second_env)
        logger.debug("Trial %d: %s / %s", index, _describe(first), _describe(second))
        return self.judge(pair, first, second)

    def judge(self, pair: InputPair, first: RunResult, second: RunResult) -> MPReport:
        report = MPReport(
            self.prepared.name, trials=1, termination_sensitive=self.termination_sensitive
        )
        outputs = (_describe(first), _describe(second))
        bound = self.bound

        def violation(reason: str, measured: float = 0.0) -> None:
            report.violations.append(MPViolation(pair.describe(), outputs, measured, bound, reason))

        if self.termination_sensitive and _terminates(first) != _terminates(second):
            report.termination_mismatches += 1
            violation("termination mismatch")
            return report
        if first.value is None or second.value is None:
            report.error_pairs += 1
            return report

        for value in (first.value, second.value):
            if not adequate(value):
                violation(f"monitored {msens(mon(value))} escapes {value.stype}")
        measured = distance(self.prepared.compiled.stype, first.value, second.value)
        report.record_slack(bound - measured)
        if measured > bound + self.tolerance:
            violation("distance exceeds bound", measured)
        if not report.violations:
            report.successes += 1
        return report


def _prepared(spec: SpecLike) -> PreparedSpec:
    return spec if isinstance(spec, PreparedSpec) else prepare(spec)


def mp_check(
    spec: SpecLike,
    pairs: int,
    seed: int,
    *,
    step_budget: int = DEFAULT_STEP_BUDGET,
    value_range: Range = DEFAULT_RANGE,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int = 1,
) -> MPReport:
    """Termination-insensitive check: error pairs are vacuous."""
    return MetricPreservation(
        _prepared(spec),
        seed,
        step_budget=step_budget,
        value_range=value_range,
        tolerance=tolerance,
        workers=workers,
    ).run(pairs)


def ts_mp_check(
    spec: SpecLike,
    pairs: int,
    seed: int,
    *,
    step_budget: int = DEFAULT_STEP_BUDGET,
    value_range: Range = DEFAULT_RANGE,
    tolerance: float = DEFAULT_TOLERANCE,
    workers: int = 1,
) -> MPReport:
    """Termination-sensitive check; rejects specifications with unbounded sensitivities."""
    return MetricPreservation(
        _prepared(spec),
        seed,
        termination_sensitive=True,
        step_budget=step_budget,
        value_range=value_range,
        tolerance=tolerance,
        workers=workers,
    ).run(pairs)
