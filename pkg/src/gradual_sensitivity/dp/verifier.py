"""Histogram-based spot check of ε-differential privacy.

Both neighbouring databases are sampled through the same mechanism and the
outputs binned on shared edges. A bin qualifies when both counts reach
``min_bin``; it also counts when one side reaches ``min_bin`` and the other
is empty, since that ratio is unbounded. The check passes when every
qualifying bin's count ratio is at most ``e^eps·(1 + tau)`` in both
directions. Passing is evidence, never a proof.
"""
from __future__ import annotations

import logging
import math
from typing import Protocol

import numpy as np
import numpy.typing as npt

from gradual_sensitivity.enums import Verdict
from gradual_sensitivity.errors import ParameterError
from gradual_sensitivity.harness.runner import spawn_generators
from gradual_sensitivity.models.results import DPReport

logger = logging.getLogger(__name__)

DEFAULT_TAU = 0.15
DEFAULT_MIN_BIN = 500
DEFAULT_BINS = 40
DEFAULT_SAMPLES = 200_000


class Sampler(Protocol):
    def sample_many(
        self, db: float, size: int, rng: np.random.Generator, *, workers: int = 1
    ) -> npt.NDArray[np.float64]:
        """``size`` independent outputs of the mechanism on ``db``."""
        ...


def shared_edges(
    first: npt.NDArray[np.float64], second: npt.NDArray[np.float64], bins: int
) -> npt.NDArray[np.float64]:
    """Bin edges over both samples; outputs with few distinct values get a bin each."""
    pooled = np.concatenate([first, second])
    distinct = np.unique(pooled)
    if len(distinct) <= bins:
        if len(distinct) == 1:
            return np.array([distinct[0] - 0.5, distinct[0] + 0.5])
        middles = (distinct[:-1] + distinct[1:]) / 2.0
        low = distinct[0] - (middles[0] - distinct[0])
        high = distinct[-1] + (distinct[-1] - middles[-1])
        return np.concatenate([[low], middles, [high]])
    return np.histogram_bin_edges(pooled, bins=bins)


def log_ratios(
    counts_first: npt.NDArray[np.int64], counts_second: npt.NDArray[np.int64], min_bin: int
) -> npt.NDArray[np.float64]:
    """``|ln(c₁/c₂)|`` for every qualifying bin (``inf`` when one side is empty)."""
    low = np.minimum(counts_first, counts_second)
    high = np.maximum(counts_first, counts_second)
    qualifying = (low >= min_bin) | ((high >= min_bin) & (low == 0))
    with np.errstate(divide="ignore"):
        ratios = np.log(high[qualifying].astype(np.float64)) - np.log(
            low[qualifying].astype(np.float64)
        )
    return ratios


def dp_ratio_test(
    mechanism: Sampler,
    db1: float,
    db2: float,
    eps: float,
    samples: int = DEFAULT_SAMPLES,
    bins: int = DEFAULT_BINS,
    *,
    tau: float = DEFAULT_TAU,
    min_bin: int = DEFAULT_MIN_BIN,
    seed: int = 0,
    workers: int = 1,
) -> DPReport:
    """Compare the output histograms of ``mechanism`` on two neighbouring databases."""
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if samples < 1 or bins < 1 or min_bin < 1:
        raise ParameterError("samples, bins and min_bin must be positive")
    logger.info("Verifying %s-DP on %s vs %s with %d samples", eps, db1, db2, samples)
    first_rng, second_rng = spawn_generators(seed, 2)
    first = mechanism.sample_many(db1, samples, first_rng, workers=workers)
    second = mechanism.sample_many(db2, samples, second_rng, workers=workers)

    edges = shared_edges(first, second, bins)
    counts_first, _ = np.histogram(first, bins=edges)
    counts_second, _ = np.histogram(second, bins=edges)
    ratios = log_ratios(counts_first, counts_second, min_bin)

    report = DPReport(
        eps=eps,
        samples=samples,
        edges=[float(edge) for edge in edges],
        counts_first=[int(count) for count in counts_first],
        counts_second=[int(count) for count in counts_second],
        qualifying_bins=int(ratios.size),
        tolerance=tau,
    )
    if ratios.size == 0:
        logger.warning("No bin reached %d samples; the check is inconclusive", min_bin)
        return report
    report.max_log_ratio = float(ratios.max())
    limit = eps + math.log1p(tau)
    report.verdict = Verdict.PASS if report.max_log_ratio <= limit else Verdict.FAIL
    logger.info(
        "DP verdict %s: max log-ratio %.4f against limit %.4f over %d bins",
        report.verdict.value,
        report.max_log_ratio,
        limit,
        report.qualifying_bins,
    )
    return report
