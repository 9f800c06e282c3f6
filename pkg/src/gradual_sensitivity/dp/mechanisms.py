"""The gradual Laplace and above-threshold mechanisms as runnable objects.

Each mechanism elaborates its driver program once; every release then binds
the database, ``eps`` and (for above-threshold) ``thr`` in a fresh
environment and runs the machine with its own noise seed.

Example:

    from gradual_sensitivity.dp.mechanisms import GlmMechanism
    from gradual_sensitivity.dp.programs import query_source

    mechanism = GlmMechanism(query_source("v"), eps=1.0)
    mechanism.run(3.0, seed=11).ok  # True: the identity is 1-sensitive
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence, Union

import numpy as np
import numpy.typing as npt

from gradual_sensitivity.checker.elaborator import TypeEnv, compile_source
from gradual_sensitivity.dp.laplace import laplace_samples
from gradual_sensitivity.dp.programs import DATABASE, DEFAULT_DB_TYPE, gat_driver, glm_driver
from gradual_sensitivity.errors import HarnessError, ParameterError
from gradual_sensitivity.harness.inputs import input_value
from gradual_sensitivity.harness.runner import draw_seed, run_trials
from gradual_sensitivity.machine import (
    DEFAULT_STEP_BUDGET,
    NoiseSource,
    RecordingNoise,
    evaluate,
)
from gradual_sensitivity.models.results import RunResult
from gradual_sensitivity.models.terms import Constant
from gradual_sensitivity.models.types import SType, real
from gradual_sensitivity.models.values import Env
from gradual_sensitivity.syntax.parser import parse_type

logger = logging.getLogger(__name__)

Database = Union[float, bool]


def _positive(name: str, value: float) -> float:
    if not 0 < value < float("inf"):
        raise ParameterError(f"{name} must be a positive finite real, got {value}")
    return float(value)


class _Mechanism:
    """Shared plumbing: the compiled driver and per-run environments."""

    def __init__(
        self, source: str, db_type: str, step_budget: int, *, thresholded: bool = False
    ) -> None:
        self.db_type = db_type
        self.step_budget = step_budget
        self._free: dict[str, SType] = {
            DATABASE: parse_type(f"{db_type}[{DATABASE}]"),
            "eps": real(),
        }
        if thresholded:
            self._free["thr"] = real()
        self.compiled = compile_source(source, TypeEnv.of(self._free))
        logger.info("%s elaborated at %s", type(self).__name__, self.compiled.stype)

    def _bindings(self, db: Database) -> dict[str, Constant]:
        raise NotImplementedError

    def environment(self, db: Database) -> Env:
        env = Env.empty()
        for name, constant in self._bindings(db).items():
            env = env.extend(name, input_value(self._free[name], constant))
        return env

    def run(
        self,
        db: Database,
        *,
        seed: Optional[int] = None,
        trace: bool = False,
        noise: Optional[NoiseSource] = None,
    ) -> RunResult:
        return evaluate(
            self.compiled.term,
            seed=seed,
            budget=self.step_budget,
            trace=trace,
            env=self.environment(db),
            noise=noise,
        )


class GlmMechanism(_Mechanism):
    """``glm(db, query, eps)``: the query's result checked at ``1db`` plus ``Lap(1/eps)``."""

    def __init__(
        self,
        query: str,
        eps: float,
        *,
        db_type: str = DEFAULT_DB_TYPE,
        step_budget: int = DEFAULT_STEP_BUDGET,
    ) -> None:
        self.query = query
        self.eps = _positive("eps", eps)
        super().__init__(glm_driver(query, db_type), db_type, step_budget)

    def _bindings(self, db: Database) -> dict[str, Constant]:
        return {DATABASE: db, "eps": self.eps}

    def release(self, db: Database, rng: np.random.Generator) -> float:
        """One noisy answer; raises when the query fails its sensitivity check."""
        result = self.run(db, seed=draw_seed(rng))
        if result.value is None:
            raise HarnessError(f"query {self.query} fails on {db}: {result.failure}")
        return float(result.value.constant)  # type: ignore[arg-type]

    def sample_many(
        self, db: Database, size: int, rng: np.random.Generator, *, workers: int = 1
    ) -> npt.NDArray[np.float64]:
        """``size`` noisy answers from a single noiseless run plus bulk Laplace draws."""
        recorder = RecordingNoise()
        result = self.run(db, noise=recorder)
        if result.value is None:
            raise HarnessError(f"query {self.query} fails on {db}: {result.failure}")
        if len(recorder.scales) != 1:
            raise HarnessError(f"expected one laplace call, saw {len(recorder.scales)}")
        exact = float(result.value.constant)  # type: ignore[arg-type]
        logger.debug("glm(%s) = %s before noise of scale %s", db, exact, recorder.scales[0])
        return exact + laplace_samples(recorder.scales[0], size, rng)


class GatMechanism(_Mechanism):
    """``gat(db, queries, thr, eps)``: index of the first query above a noisy threshold."""

    def __init__(
        self,
        queries: Sequence[str],
        thr: float,
        eps: float,
        *,
        db_type: str = DEFAULT_DB_TYPE,
        step_budget: int = DEFAULT_STEP_BUDGET,
    ) -> None:
        self.queries = tuple(queries)
        self.thr = float(thr)
        self.eps = _positive("eps", eps)
        super().__init__(
            gat_driver(self.queries, db_type), db_type, step_budget, thresholded=True
        )

    def _bindings(self, db: Database) -> dict[str, Constant]:
        return {DATABASE: db, "thr": self.thr, "eps": self.eps}

    def release(self, db: Database, rng: np.random.Generator) -> int:
        result = self.run(db, seed=draw_seed(rng))
        if result.value is None:
            raise HarnessError(f"above-threshold failed on {db}: {result.failure}")
        return int(result.value.constant)  # type: ignore[arg-type]

    def sample_many(
        self, db: Database, size: int, rng: np.random.Generator, *, workers: int = 1
    ) -> npt.NDArray[np.float64]:
        seed = draw_seed(rng)
        indices = run_trials(lambda _, child: self.release(db, child), size, seed, workers=workers)
        return np.asarray(indices, dtype=np.float64)

    def skipped(self, db: Database) -> frozenset[int]:
        """Queries whose inner ``glm`` call fails on ``db``; independent of the noise."""
        inner = self.eps / 4
        return frozenset(
            position
            for position, query in enumerate(self.queries)
            if not GlmMechanism(
                query, inner, db_type=self.db_type, step_budget=self.step_budget
            ).run(db, noise=RecordingNoise()).ok
        )


def glm(db: Database, query: str, eps: float, rng: np.random.Generator) -> RunResult:
    """Run the gradual Laplace mechanism once; failures come back in the result."""
    return GlmMechanism(query, eps).run(db, seed=draw_seed(rng))


def gat(
    db: Database, queries: Sequence[str], thr: float, eps: float, rng: np.random.Generator
) -> int:
    return GatMechanism(queries, thr, eps).release(db, rng)
