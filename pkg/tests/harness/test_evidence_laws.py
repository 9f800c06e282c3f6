import numpy as np
import pytest

from gradual_sensitivity.calculus.precision import st_precision
from gradual_sensitivity.harness import evidence_laws, interior_optimality_fuzz
from gradual_sensitivity.harness.evidence_laws import LAWS, fuzz_law
from gradual_sensitivity.harness.generators import (
    evidence_chain,
    random_skeleton,
    random_variant,
    refine_type,
)
from gradual_sensitivity.models.types import effects_of


def test_every_law_holds():
    reports = evidence_laws(300, seed=20240601)
    assert [report.law for report in reports] == list(LAWS)
    for report in reports:
        assert report.passed, report.counterexamples[:3]
        assert report.defined + report.undefined == report.trials


def test_associativity_holds_on_many_triples():
    report = fuzz_law("ctrans-associativity", 6000, seed=99)
    assert report.passed, report.counterexamples[:3]
    assert report.defined > 50


def test_interior_is_optimal():
    report = interior_optimality_fuzz(3000, seed=5)
    assert report.passed, report.counterexamples[:3]
    assert report.defined > 0


@pytest.mark.parametrize("seed", range(40))
def test_chained_evidences_share_middle_types(seed):
    rng = np.random.default_rng(seed)
    found = evidence_chain(random_skeleton(rng), rng, 3)
    if found is None:
        return
    types, chain = found
    assert len(types) == 4 and len(chain) == 3
    for position, evidence in enumerate(chain):
        assert st_precision(evidence.lhs, types[position])
        assert st_precision(evidence.rhs, types[position + 1])


@pytest.mark.parametrize("seed", range(20))
def test_refinements_are_static(seed):
    rng = np.random.default_rng(seed)
    variant = random_variant(random_skeleton(rng), rng)
    refined = refine_type(variant, rng)
    assert st_precision(refined, variant)
    assert all(g.lo == g.hi for effect in effects_of(refined) for _, g in effect)


@pytest.mark.parametrize(
    "law", ["ctrans-associativity", "interior-soundness", "interior-optimality"]
)
def test_laws_see_defined_operands(law):
    report = fuzz_law(law, 400, seed=1)
    assert report.defined > 0


def test_parallel_runs_match_sequential_ones():
    sequential = fuzz_law("ctrans-monotonicity", 120, seed=3)
    parallel = fuzz_law("ctrans-monotonicity", 120, seed=3, workers=4)
    assert sequential.to_dict() == parallel.to_dict()
