import numpy as np
import pytest

from gradual_sensitivity.dp.laplace import laplace_samples
from gradual_sensitivity.dp.mechanisms import GlmMechanism
from gradual_sensitivity.dp.programs import query_source
from gradual_sensitivity.dp.verifier import dp_ratio_test, log_ratios, shared_edges
from gradual_sensitivity.enums import Verdict
from gradual_sensitivity.errors import HarnessError, ParameterError


class ScaledQuery:
    """A Laplace release of ``factor·db`` calibrated as if the query were 1-sensitive."""

    def __init__(self, factor, eps):
        self.factor = factor
        self.eps = eps

    def sample_many(self, db, size, rng, *, workers=1):
        return self.factor * db + laplace_samples(1.0 / self.eps, size, rng)


def test_identity_glm_passes():
    mechanism = GlmMechanism(query_source("v"), eps=1.0)
    report = dp_ratio_test(mechanism, 0.0, 0.5, 1.0, samples=40_000, min_bin=500, seed=3)
    assert report.verdict is Verdict.PASS
    assert report.qualifying_bins > 0
    assert report.max_log_ratio <= 1.0 + np.log1p(report.tolerance)


def test_miscalibrated_release_fails():
    report = dp_ratio_test(ScaledQuery(3.0, 1.0), 0.0, 1.0, 1.0, samples=40_000, min_bin=500)
    assert report.verdict is Verdict.FAIL
    assert report.max_log_ratio > 2.0


def test_identical_databases_pass():
    mechanism = GlmMechanism(query_source("v"), eps=1.0)
    report = dp_ratio_test(mechanism, 2.0, 2.0, 1.0, samples=40_000, min_bin=500, seed=8)
    assert report.verdict is Verdict.PASS


def test_too_few_samples_is_inconclusive():
    report = dp_ratio_test(ScaledQuery(1.0, 1.0), 0.0, 1.0, 1.0, samples=100, min_bin=500)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert report.qualifying_bins == 0


def test_failing_query_cannot_be_sampled():
    with pytest.raises(HarnessError):
        dp_ratio_test(GlmMechanism(query_source("v + v"), eps=1.0), 0.0, 1.0, 1.0, samples=10)


@pytest.mark.parametrize(
    "options", [{"eps": 0.0}, {"samples": 0}, {"bins": 0}, {"min_bin": 0}]
)
def test_parameter_errors(options):
    arguments = {"eps": 1.0, "samples": 10, "bins": 5, "min_bin": 1, **options}
    with pytest.raises(ParameterError):
        dp_ratio_test(ScaledQuery(1.0, 1.0), 0.0, 1.0, **arguments)


def test_discrete_outputs_get_a_bin_each():
    edges = shared_edges(np.array([0.0, 1.0, 1.0]), np.array([2.0, 0.0]), bins=10)
    counts, _ = np.histogram(np.array([0.0, 1.0, 1.0, 2.0]), bins=edges)
    assert counts.tolist() == [1, 2, 1]
    single = shared_edges(np.array([-1.0]), np.array([-1.0]), bins=10)
    assert single.tolist() == [-1.5, -0.5]


def test_empty_side_gives_infinite_ratio():
    ratios = log_ratios(np.array([600, 10, 0]), np.array([600, 700, 0]), min_bin=500)
    assert ratios.tolist() == [0.0]
    ratios = log_ratios(np.array([0]), np.array([800]), min_bin=500)
    assert np.isinf(ratios[0])
