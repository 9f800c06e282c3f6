"""Helpers for presenting and serializing harness and DP reports.

Example:

    from gradual_sensitivity.io import reports

    print(reports.mp_table([report]))
    reports.write_output(Path("mp.yaml"), reports.document("mp", [report.to_dict()]))
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

from ruamel.yaml import YAML

from gradual_sensitivity.errors import SettingsError
from gradual_sensitivity.models.results import DPReport, FuzzReport, GGReport, MPReport

SCHEMA_VERSION = 1


def document(kind: str, results: Sequence[Dict[str, Any]], **extra: Any) -> Dict[str, Any]:
    """The single structured document one invocation emits."""
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **extra, "results": list(results)}


def dumps_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


def write_output(path: Path, payload: Dict[str, Any]) -> None:
    """Persist ``payload`` as JSON when the suffix says so, YAML otherwise."""
    try:
        with path.open("w", encoding="utf-8") as handle:
            if path.suffix.lower() == ".json":
                handle.write(dumps_json(payload) + "\n")
            else:
                yaml = YAML(typ="safe")
                yaml.default_flow_style = False
                yaml.dump(payload, handle)
    except OSError as exc:
        raise SettingsError(f"cannot write report {path}: {exc.strerror}") from exc


def render_table(headers: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    cells: List[List[str]] = [list(headers)] + [[str(cell) for cell in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(line.rstrip() for line in lines)


def _mark(passed: bool) -> str:
    return "ok" if passed else "FAIL"


def mp_table(reports: Sequence[MPReport]) -> str:
    rows = [
        (
            r.name,
            r.trials,
            r.successes,
            r.error_pairs,
            r.termination_mismatches,
            len(r.violations),
            _mark(r.passed),
        )
        for r in reports
    ]
    headers = ("program", "pairs", "ok", "errors", "ts-mismatch", "violations", "")
    return render_table(headers, rows)


def gg_table(report: GGReport) -> str:
    row = (
        report.kind.value,
        report.programs,
        report.widenings,
        report.checked,
        len(report.counterexamples),
        _mark(report.passed),
    )
    headers = ("guarantee", "programs", "widenings", "checked", "counterexamples", "")
    return render_table(headers, [row])


def fuzz_table(reports: Sequence[FuzzReport]) -> str:
    rows = [
        (r.law, r.trials, r.defined, r.undefined, len(r.counterexamples), _mark(r.passed))
        for r in reports
    ]
    return render_table(("law", "trials", "defined", "vacuous", "counterexamples", ""), rows)


def dp_table(report: DPReport) -> str:
    summary = render_table(
        ("eps", "samples", "qualifying bins", "max log-ratio", "tau", "verdict"),
        [
            (
                report.eps,
                report.samples,
                report.qualifying_bins,
                f"{report.max_log_ratio:.4f}",
                report.tolerance,
                report.verdict.value,
            )
        ],
    )
    bins = render_table(
        ("bin", "low", "high", "first", "second"),
        [
            (i, f"{report.edges[i]:.3f}", f"{report.edges[i + 1]:.3f}", a, b)
            for i, (a, b) in enumerate(zip(report.counts_first, report.counts_second))
        ],
    )
    return summary + "\n\n" + bins


def violation_lines(reports: Sequence[MPReport], *, limit: int = 5) -> List[str]:
    lines: List[str] = []
    for report in reports:
        for violation in report.violations[:limit]:
            inputs = ", ".join(f"{k}={a}/{b}" for k, (a, b) in violation.inputs.items())
            lines.append(
                f"  {report.name}: {violation.reason} "
                f"[{inputs}] -> {violation.outputs[0]} / {violation.outputs[1]} "
                f"(distance {violation.distance}, bound {violation.bound})",
            )
    return lines
