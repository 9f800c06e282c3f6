"""Independent trials on per-trial random streams, optionally in parallel."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")

Trial = Callable[[int, np.random.Generator], T]


def spawn_generators(seed: int, count: int) -> list[np.random.Generator]:
    """One generator per trial, split from a single master seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.default_rng(child) for child in children]


def draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


def run_trials(trial: Trial[T], count: int, seed: int, *, workers: int = 1) -> list[T]:
    """Run ``trial(index, rng)`` ``count`` times; results come back in index order."""
    generators = spawn_generators(seed, count)
    if workers <= 1 or count <= 1:
        return [trial(index, rng) for index, rng in enumerate(generators)]
    logger.debug("Running %d trials on %d workers", count, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(trial, range(count), generators))
