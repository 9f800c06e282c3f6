import numpy as np
import pytest

from gradual_sensitivity.dp.mechanisms import GatMechanism, GlmMechanism, gat, glm
from gradual_sensitivity.dp.programs import gat_driver, glm_driver, query_source
from gradual_sensitivity.errors import HarnessError, ParameterError
from gradual_sensitivity.machine import RecordingNoise

IDENTITY = query_source("v")
DOUBLE = query_source("v + v")
TRIPLE = query_source("v + v + v")
ZERO = query_source("0")


def test_drivers_leave_database_free():
    assert glm_driver(IDENTITY).endswith("glm(db, fn (v: Number[db]) => v, eps)\n")
    assert "List<Number[1db] -> Number[?db]>(" in gat_driver([IDENTITY, DOUBLE])


@pytest.mark.parametrize("query", [IDENTITY, ZERO])
def test_glm_accepts_queries_within_one(query):
    noise = RecordingNoise()
    result = GlmMechanism(query, eps=0.5).run(4.0, noise=noise)
    assert result.ok
    assert noise.scales == [2.0]


def test_glm_rejects_doubling_query():
    mechanism = GlmMechanism(DOUBLE, eps=1.0)
    result = mechanism.run(4.0, seed=1)
    assert result.is_violation()
    with pytest.raises(HarnessError, match="fails on"):
        mechanism.release(4.0, np.random.default_rng(0))


def test_glm_function_form():
    result = glm(3.0, IDENTITY, 1.0, np.random.default_rng(5))
    assert result.ok


def test_releases_depend_on_the_seed():
    mechanism = GlmMechanism(IDENTITY, eps=1.0)
    first = mechanism.release(1.0, np.random.default_rng(1))
    second = mechanism.release(1.0, np.random.default_rng(2))
    assert first != second
    assert mechanism.release(1.0, np.random.default_rng(1)) == first


def test_bulk_samples_centre_on_the_answer():
    draws = GlmMechanism(IDENTITY, eps=2.0).sample_many(3.0, 50_000, np.random.default_rng(0))
    assert draws.mean() == pytest.approx(3.0, abs=0.02)


def test_eps_must_be_positive():
    with pytest.raises(ParameterError, match="eps"):
        GlmMechanism(IDENTITY, eps=0.0)
    with pytest.raises(ParameterError, match="eps"):
        GatMechanism([IDENTITY], thr=0.0, eps=-1.0)


def test_above_threshold_skips_oversensitive_queries():
    mechanism = GatMechanism([IDENTITY, TRIPLE, IDENTITY], thr=2.0, eps=1.0)
    assert mechanism.skipped(5.0) == frozenset({1})
    rng = np.random.default_rng(12)
    picks = [mechanism.release(5.0, rng) for _ in range(30)]
    assert 1 not in picks
    assert set(picks) <= {-1, 0, 2}


def test_above_threshold_with_only_oversensitive_queries():
    rng = np.random.default_rng(2)
    assert all(gat(5.0, [DOUBLE, TRIPLE], 0.0, 1.0, rng) == -1 for _ in range(5))


def test_above_threshold_samples_are_indices():
    mechanism = GatMechanism([IDENTITY], thr=-100.0, eps=1.0)
    draws = mechanism.sample_many(0.0, 8, np.random.default_rng(4), workers=2)
    assert draws.tolist() == [0.0] * 8
