import math

import numpy as np
import pytest

from gradual_sensitivity.dp.laplace import (
    LaplaceParams,
    inverse_cdf,
    laplace_sample,
    laplace_samples,
)
from gradual_sensitivity.errors import ParameterError


def test_density_and_cdf():
    params = LaplaceParams(2.0)
    assert params.density(0.0) == pytest.approx(0.25)
    assert params.cdf(0.0) == pytest.approx(0.5)
    assert params.cdf(2.0) == pytest.approx(1.0 - 0.5 * math.exp(-1.0))
    assert params.cdf(-2.0) == pytest.approx(0.5 * math.exp(-1.0))


def test_inverse_cdf():
    assert inverse_cdf(0.0, 1.0) == 0.0
    assert inverse_cdf(0.25, 1.0) == pytest.approx(math.log(2.0))
    assert inverse_cdf(-0.25, 3.0) == pytest.approx(-3.0 * math.log(2.0))


@pytest.mark.parametrize("scale", [0.0, -1.0, math.inf, math.nan])
def test_scale_must_be_positive_and_finite(scale):
    with pytest.raises(ParameterError, match="positive real"):
        LaplaceParams(scale)


def test_mechanism_scale():
    assert LaplaceParams.for_mechanism(2.0, 0.5).scale == 4.0
    with pytest.raises(ParameterError, match="eps"):
        LaplaceParams.for_mechanism(1.0, 0.0)


@pytest.mark.parametrize("scale", [0.5, 1.0, 4.0])
def test_sample_moments(scale):
    draws = laplace_samples(scale, 100_000, np.random.default_rng(17))
    assert abs(draws.mean()) < 0.05 * scale
    assert np.abs(draws).mean() == pytest.approx(scale, rel=0.03)
    assert draws.var() == pytest.approx(2.0 * scale * scale, rel=0.05)


def test_single_draws_follow_the_generator():
    first = [laplace_sample(1.0, rng) for rng in [np.random.default_rng(3)] * 3]
    again = [laplace_sample(1.0, rng) for rng in [np.random.default_rng(3)] * 3]
    assert first == again
    assert len(set(first)) == 3
    assert all(math.isfinite(x) for x in first)
