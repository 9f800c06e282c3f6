"""Fuzzers for the algebraic laws of the evidence operators."""
from __future__ import annotations

import logging
from typing import Callable, Optional, Union

import numpy as np

from gradual_sensitivity.calculus.evidence_ops import ctrans, interior
from gradual_sensitivity.calculus.precision import alpha_equal, ev_precision, st_precision
from gradual_sensitivity.calculus.projections import stype_join
from gradual_sensitivity.calculus.subtyping import consistent_subtyping
from gradual_sensitivity.harness.generators import (
    evidence_chain,
    random_skeleton,
    random_variant,
    refine_type,
    widen_type,
)
from gradual_sensitivity.harness.runner import run_trials
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.results import FuzzReport
from gradual_sensitivity.models.types import SType, effects_of

logger = logging.getLogger(__name__)

# None when the trial was vacuous, True when the law held on defined operands,
# otherwise the counterexample text.
Outcome = Union[None, bool, str]
LawTrial = Callable[[int, np.random.Generator], Outcome]


def _compose(first: Optional[Evidence], second: Optional[Evidence]) -> Optional[Evidence]:
    if first is None or second is None:
        return None
    return ctrans(first, second)


def _same(first: Evidence, second: Evidence) -> bool:
    return alpha_equal(first.lhs, second.lhs) and alpha_equal(first.rhs, second.rhs)


def _chain(rng: np.random.Generator, length: int) -> Optional[list[Evidence]]:
    found = evidence_chain(random_skeleton(rng), rng, length)
    return None if found is None else found[1]


def _associativity(_: int, rng: np.random.Generator) -> Outcome:
    chain = _chain(rng, 3)
    if chain is None:
        return None
    first, second, third = chain
    left = _compose(ctrans(first, second), third)
    right = _compose(first, ctrans(second, third))
    if left is None and right is None:
        return None
    if left is None or right is None or not _same(left, right):
        return (
            f"({first} ∘ {second}) ∘ {third} = {left} "
            f"but {first} ∘ ({second} ∘ {third}) = {right}"
        )
    return True


def _monotonicity(_: int, rng: np.random.Generator) -> Outcome:
    chain = _chain(rng, 2)
    if chain is None:
        return None
    first, second = chain
    wider_first = interior(widen_type(first.lhs, rng), widen_type(first.rhs, rng))
    wider_second = interior(widen_type(second.lhs, rng), widen_type(second.rhs, rng))
    if wider_first is None or wider_second is None:
        return None
    if not ev_precision(first, wider_first) or not ev_precision(second, wider_second):
        return None
    precise = ctrans(first, second)
    imprecise = ctrans(wider_first, wider_second)
    if precise is None or imprecise is None:
        return None
    if not ev_precision(precise, imprecise):
        return (
            f"{first} ∘ {second} = {precise} is not more precise than "
            f"{wider_first} ∘ {wider_second} = {imprecise}"
        )
    return True


def _interior_soundness(_: int, rng: np.random.Generator) -> Outcome:
    skeleton = random_skeleton(rng)
    first, second = random_variant(skeleton, rng), random_variant(skeleton, rng)
    found = interior(first, second)
    if (found is not None) != consistent_subtyping(first, second):
        return f"interior({first}, {second}) = {found} disagrees with consistent subtyping"
    if found is None:
        return None
    if not st_precision(found.lhs, first) or not st_precision(found.rhs, second):
        return f"interior({first}, {second}) = {found} is not a refinement"
    if _static(first) and _static(second) and not _same(found, Evidence(first, second)):
        return f"interior of static {first} <: {second} should be the pair itself, got {found}"
    return True


def _interior_optimality(_: int, rng: np.random.Generator) -> Outcome:
    skeleton = random_skeleton(rng)
    first, second = random_variant(skeleton, rng), random_variant(skeleton, rng)
    found = interior(first, second)
    if found is None:
        return None
    witness = Evidence(refine_type(first, rng), refine_type(second, rng))
    if not consistent_subtyping(witness.lhs, witness.rhs):
        return None
    if not ev_precision(witness, found):
        return (
            f"{witness.lhs} <: {witness.rhs} refines {first} ≲ {second} "
            f"but is not covered by interior {found}"
        )
    return True


def _static(stype: SType) -> bool:
    return all(effect.is_static() for effect in effects_of(stype))


def _join_upper_bound(_: int, rng: np.random.Generator) -> Outcome:
    skeleton = random_skeleton(rng)
    first, second = random_variant(skeleton, rng), random_variant(skeleton, rng)
    joined = stype_join(first, second)
    if joined is None:
        return None
    if not consistent_subtyping(first, joined) or not consistent_subtyping(second, joined):
        return f"{joined} = {first} ⋎ {second} is not above both arguments"
    return True


LAWS: dict[str, LawTrial] = {
    "ctrans-associativity": _associativity,
    "ctrans-monotonicity": _monotonicity,
    "interior-soundness": _interior_soundness,
    "interior-optimality": _interior_optimality,
    "join-upper-bound": _join_upper_bound,
}


def fuzz_law(law: str, trials: int, seed: int, *, workers: int = 1) -> FuzzReport:
    logger.info("Fuzzing %s with %d trials", law, trials)
    report = FuzzReport(law, trials=trials)
    for outcome in run_trials(LAWS[law], trials, seed, workers=workers):
        if outcome is None:
            report.undefined += 1
        elif outcome is True:
            report.defined += 1
        else:
            report.counterexamples.append(str(outcome))
    logger.info(
        "%s: %d defined, %d vacuous, %d counterexamples",
        law,
        report.defined,
        report.undefined,
        len(report.counterexamples),
    )
    return report


def ctrans_assoc_fuzz(trials: int, seed: int, *, workers: int = 1) -> FuzzReport:
    return fuzz_law("ctrans-associativity", trials, seed, workers=workers)


def ctrans_monotonicity_fuzz(trials: int, seed: int, *, workers: int = 1) -> FuzzReport:
    return fuzz_law("ctrans-monotonicity", trials, seed, workers=workers)


def interior_fuzz(trials: int, seed: int, *, workers: int = 1) -> FuzzReport:
    return fuzz_law("interior-soundness", trials, seed, workers=workers)


def interior_optimality_fuzz(trials: int, seed: int, *, workers: int = 1) -> FuzzReport:
    return fuzz_law("interior-optimality", trials, seed, workers=workers)


def evidence_laws(trials: int, seed: int, *, workers: int = 1) -> list[FuzzReport]:
    """Every law, each on its own seed derived from ``seed``."""
    return [
        fuzz_law(law, trials, seed + offset, workers=workers) for offset, law in enumerate(LAWS)
    ]
