"""Result containers for evaluation runs, harness reports and DP verification.

Example:

    from gradual_sensitivity.models.results import MPReport

    report = MPReport(name="x+2y", trials=1000)
    report.passed  # True while no violation has been recorded
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from gradual_sensitivity.enums import GuaranteeKind, OutcomeKind, RuntimeErrorKind, Verdict
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import format_sens
from gradual_sensitivity.models.values import Value
from gradual_sensitivity.syntax.tokens import Span


@dataclass(frozen=True, slots=True)
class RuntimeFailure:
    kind: RuntimeErrorKind
    message: str
    evidence: Optional[tuple[Evidence, Evidence]] = None
    span: Optional[Span] = None

    def __str__(self) -> str:
        text = f"{self.kind.value}: {self.message}"
        if self.evidence is not None:
            text += f" ({self.evidence[0]} ∘ {self.evidence[1]} is undefined)"
        return text


@dataclass(frozen=True, slots=True)
class TraceEvent:
    step: int
    rule: str
    redex: str
    evidence: Optional[Evidence] = None

    def __str__(self) -> str:
        evidence = f" {self.evidence}" if self.evidence is not None else ""
        return f"#{self.step} {self.rule} {self.redex}{evidence}"


@dataclass(slots=True)
class RunResult:
    kind: OutcomeKind
    value: Optional[Value] = None
    failure: Optional[RuntimeFailure] = None
    steps: int = 0
    trace: List[TraceEvent] = field(default_factory=list)

    def __post_init__(self) -> None:
        errors: list[str] = []
        if self.kind is OutcomeKind.VALUE and self.value is None:
            errors.append("a value outcome needs a value")
        if self.kind is OutcomeKind.ERROR and self.failure is None:
            errors.append("an error outcome needs a failure")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def ok(self) -> bool:
        return self.kind is OutcomeKind.VALUE

    def is_violation(self) -> bool:
        return (
            self.failure is not None
            and self.failure.kind is RuntimeErrorKind.SENSITIVITY_VIOLATION
        )


@dataclass(slots=True)
class MPViolation:
    inputs: Dict[str, tuple[str, str]]
    outputs: tuple[str, str]
    distance: float
    bound: float
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inputs": {name: list(pair) for name, pair in self.inputs.items()},
            "outputs": list(self.outputs),
            "distance": _number(self.distance),
            "bound": _number(self.bound),
            "reason": self.reason,
        }


@dataclass(slots=True)
class MPReport:
    name: str
    trials: int = 0
    successes: int = 0
    error_pairs: int = 0
    termination_mismatches: int = 0
    termination_sensitive: bool = False
    max_slack: float = float("inf")
    violations: List[MPViolation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record_slack(self, slack: float) -> None:
        self.max_slack = min(self.max_slack, slack)

    def merge(self, other: "MPReport") -> None:
        self.trials += other.trials
        self.successes += other.successes
        self.error_pairs += other.error_pairs
        self.termination_mismatches += other.termination_mismatches
        self.max_slack = min(self.max_slack, other.max_slack)
        self.violations.extend(other.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "mode": "ts-mp" if self.termination_sensitive else "mp",
            "trials": self.trials,
            "successes": self.successes,
            "error_pairs": self.error_pairs,
            "termination_mismatches": self.termination_mismatches,
            "min_slack": _number(self.max_slack),
            "violations": [v.to_dict() for v in self.violations],
            "passed": self.passed,
        }


@dataclass(slots=True)
class GGCounterexample:
    program: str
    widened: str
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {"program": self.program, "widened": self.widened, "reason": self.reason}


@dataclass(slots=True)
class GGReport:
    kind: GuaranteeKind
    programs: int = 0
    widenings: int = 0
    checked: int = 0
    counterexamples: List[GGCounterexample] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "programs": self.programs,
            "widenings": self.widenings,
            "checked": self.checked,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
            "passed": self.passed,
        }


@dataclass(slots=True)
class FuzzReport:
    law: str
    trials: int = 0
    defined: int = 0
    undefined: int = 0
    counterexamples: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            "law": self.law,
            "trials": self.trials,
            "defined": self.defined,
            "undefined": self.undefined,
            "counterexamples": list(self.counterexamples[:20]),
            "passed": self.passed,
        }


@dataclass(slots=True)
class DPReport:
    eps: float
    samples: int
    edges: List[float] = field(default_factory=list)
    counts_first: List[int] = field(default_factory=list)
    counts_second: List[int] = field(default_factory=list)
    qualifying_bins: int = 0
    max_log_ratio: float = 0.0
    tolerance: float = 0.15
    verdict: Verdict = Verdict.INCONCLUSIVE

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps": self.eps,
            "samples": self.samples,
            "bins": len(self.counts_first),
            "qualifying_bins": self.qualifying_bins,
            "max_log_ratio": _number(self.max_log_ratio),
            "tolerance": self.tolerance,
            "verdict": self.verdict.value,
            "edges": list(self.edges),
            "counts": [list(self.counts_first), list(self.counts_second)],
        }


def _number(value: float) -> Any:
    if value == float("inf") or value == float("-inf"):
        return format_sens(value) if value > 0 else "-inf"
    return value
