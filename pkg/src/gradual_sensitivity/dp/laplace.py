"""Laplace noise by inverse-CDF sampling.

Example:

    import numpy as np
    from gradual_sensitivity.dp.laplace import LaplaceParams, laplace_sample

    rng = np.random.default_rng(7)
    noise = laplace_sample(1.0, rng)
    LaplaceParams(2.0).density(0.0)  # 0.25
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from gradual_sensitivity.errors import ParameterError

# numpy's uniform draws from [low, high); nudging the low end keeps ln(1 - 2|u|) finite.
_U_LOW = float(np.nextafter(-0.5, 0.0))


@dataclass(frozen=True, slots=True)
class LaplaceParams:
    """Zero-centred Laplace distribution with scale ``b``."""

    scale: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.scale) or self.scale <= 0:
            raise ParameterError(f"Laplace scale must be a positive real, got {self.scale}")

    @classmethod
    def for_mechanism(cls, sensitivity: float, eps: float) -> "LaplaceParams":
        if not eps > 0:
            raise ParameterError(f"eps must be positive, got {eps}")
        return cls(sensitivity / eps)

    def density(self, x: float) -> float:
        return math.exp(-abs(x) / self.scale) / (2.0 * self.scale)

    def cdf(self, x: float) -> float:
        if x < 0:
            return 0.5 * math.exp(x / self.scale)
        return 1.0 - 0.5 * math.exp(-x / self.scale)

    def sample(self, rng: np.random.Generator) -> float:
        return inverse_cdf(float(rng.uniform(_U_LOW, 0.5)), self.scale)

    def samples(self, size: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
        u = rng.uniform(_U_LOW, 0.5, size)
        return -self.scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def inverse_cdf(u: float, scale: float) -> float:
    """``-b·sign(u)·ln(1 - 2|u|)`` for ``u`` in ``(-1/2, 1/2)``."""
    if u == 0:
        return 0.0
    return -scale * math.copysign(1.0, u) * math.log1p(-2.0 * abs(u))


def laplace_sample(scale: float, rng: np.random.Generator) -> float:
    return LaplaceParams(scale).sample(rng)


def laplace_samples(scale: float, size: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    return LaplaceParams(scale).samples(size, rng)
