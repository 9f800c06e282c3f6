"""Random sources for the ``laplace`` primitive."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Protocol

import numpy as np

from gradual_sensitivity.dp.laplace import LaplaceParams


class NoiseSource(Protocol):
    def sample(self, scale: float) -> float:
        """One Laplace draw with the given scale."""
        ...


class LaplaceNoise:
    """Numpy-backed sampler; one generator per machine."""

    def __init__(self, seed: Optional[int] = None, *, rng: Optional[np.random.Generator] = None):
        self._rng = rng if rng is not None else np.random.default_rng(seed)

    def sample(self, scale: float) -> float:
        return LaplaceParams(scale).sample(self._rng)


@dataclass
class RecordingNoise:
    """Adds no noise and records every requested scale."""

    scales: List[float] = field(default_factory=list)

    def sample(self, scale: float) -> float:
        LaplaceParams(scale)
        self.scales.append(scale)
        return 0.0
