"""Command-line entry point for checking, running and testing programs.

Example:

    gsens check corpus/glm.gsoul
    gsens run corpus/scale_two.gsoul --trace
    gsens test mp corpus/mp_corpus.yaml --pairs 200
    gsens dp verify --query "v" --db1 0 --db2 1 --eps 1

    # shorthand for `gsens run`
    gsens corpus/scale_two.gsoul
"""
from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import typer

from gradual_sensitivity.checker.elaborator import Compiled, compile_source
from gradual_sensitivity.cli.repl import Repl
from gradual_sensitivity.dp.mechanisms import GatMechanism, GlmMechanism
from gradual_sensitivity.dp.programs import query_source
from gradual_sensitivity.dp.verifier import dp_ratio_test
from gradual_sensitivity.enums import GuaranteeKind, OutcomeKind, Verdict
from gradual_sensitivity.errors import (
    GradualSensitivityError,
    LexError,
    ParameterError,
    ParseError,
    SensitivityTypeError,
    SettingsError,
)
from gradual_sensitivity.harness.evidence_laws import LAWS, evidence_laws, fuzz_law
from gradual_sensitivity.harness.gradual_guarantee import gg_fuzz
from gradual_sensitivity.harness.metric_preservation import mp_check, ts_mp_check
from gradual_sensitivity.harness.runner import draw_seed
from gradual_sensitivity.io import reports
from gradual_sensitivity.io.loader import SpecLoader, read_program
from gradual_sensitivity.io.settings import GsensSettings, load_settings
from gradual_sensitivity.machine import evaluate
from gradual_sensitivity.models.results import RunResult
from gradual_sensitivity.models.values import mon, msens
from gradual_sensitivity.utils.logging_config import configure_logging

app = typer.Typer(help="Gradual sensitivity typing: check, run and test programs")
test_app = typer.Typer(help="Randomised checks of the language's metatheory")
dp_app = typer.Typer(help="Differentially private mechanisms and their verifier")
app.add_typer(test_app, name="test")
app.add_typer(dp_app, name="dp")
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_VIOLATION = 2
EXIT_RUNTIME_ERROR = 3
EXIT_PARSE_ERROR = 4
EXIT_INPUT_ERROR = 5

COMMANDS = {"check", "run", "test", "dp", "repl"}


def _settings(ctx: typer.Context) -> GsensSettings:
    if isinstance(ctx.obj, GsensSettings):
        return ctx.obj
    return load_settings()


def _resolved(ctx: typer.Context, **flags: Any) -> GsensSettings:
    """Settings with the command-line flags that were given applied on top."""
    try:
        return _settings(ctx).override(**flags)
    except SettingsError as exc:
        raise _fail(exc) from exc


def diagnostic(exc: GradualSensitivityError) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"severity": "error", "code": exc.code, "message": exc.message}
    if exc.span is not None:
        entry["line"], entry["column"] = exc.span.line, exc.span.column
    if exc.suggestion:
        entry["suggestion"] = exc.suggestion
    return entry


def runtime_diagnostic(result: RunResult) -> Dict[str, Any]:
    if result.failure is None:
        return {
            "severity": "error",
            "code": result.kind.value,
            "message": f"step budget exhausted after {result.steps} steps",
        }
    failure = result.failure
    entry: Dict[str, Any] = {
        "severity": "error",
        "code": failure.kind.value,
        "message": failure.message,
    }
    if failure.evidence is not None:
        entry["evidence"] = [str(failure.evidence[0]), str(failure.evidence[1])]
    if failure.span is not None:
        entry["line"], entry["column"] = failure.span.line, failure.span.column
    return entry


def _exit_code(exc: GradualSensitivityError) -> int:
    if isinstance(exc, (LexError, ParseError)):
        return EXIT_PARSE_ERROR
    if isinstance(exc, SensitivityTypeError):
        return EXIT_TYPE_ERROR
    if isinstance(exc, ParameterError):
        return EXIT_RUNTIME_ERROR
    return EXIT_INPUT_ERROR


def _fail(exc: GradualSensitivityError, *, where: str = "") -> typer.Exit:
    head = (f"{where}:" if where else "") + (f"{exc.span}:" if exc.span is not None else "")
    typer.secho(f"{head} error {exc}" if head else f"error {exc}", fg=typer.colors.RED, err=True)
    if exc.suggestion:
        typer.secho(f"  hint: {exc.suggestion}", fg=typer.colors.YELLOW, err=True)
    return typer.Exit(code=_exit_code(exc))


def _emit_json(payload: Dict[str, Any]) -> None:
    typer.echo(reports.dumps_json(payload))


def effect_text(text: str) -> str:
    return text or "∅"


def _compile_file(path: Path) -> Compiled:
    source = read_program(path)
    return compile_source(source)


def _program_document(
    diagnostics: List[Dict[str, Any]],
    *,
    value: Optional[str] = None,
    stype: Optional[str] = None,
    monitored: Optional[str] = None,
) -> Dict[str, Any]:
    return {
        "schema_version": reports.SCHEMA_VERSION,
        "diagnostics": diagnostics,
        "value": value,
        "type": stype,
        "monitored_effect": monitored,
    }


@app.command()
def check(
    file: Path = typer.Argument(..., help="Program to typecheck."),
    as_json: bool = typer.Option(False, "--json", help="Emit one structured document."),
) -> None:
    """Typecheck a program and print its type."""
    configure_logging()
    try:
        compiled = _compile_file(file)
    except GradualSensitivityError as exc:
        if as_json:
            _emit_json(_program_document([diagnostic(exc)]))
            raise typer.Exit(code=_exit_code(exc)) from exc
        raise _fail(exc, where=str(file)) from exc
    if as_json:
        _emit_json(_program_document([], stype=str(compiled.stype)))
    else:
        typer.echo(str(compiled.stype))


@app.command()
def run(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="Program to run."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for laplace noise."),
    trace: bool = typer.Option(False, "--trace", help="Print every machine step."),
    step_budget: Optional[int] = typer.Option(None, "--step-budget", help="Maximum steps."),
    as_json: bool = typer.Option(False, "--json", help="Emit one structured document."),
) -> None:
    """Typecheck and evaluate a program, printing its value and monitored effect."""
    configure_logging()
    settings = _resolved(ctx, seed=seed, step_budget=step_budget)
    try:
        compiled = _compile_file(file)
    except GradualSensitivityError as exc:
        if as_json:
            _emit_json(_program_document([diagnostic(exc)]))
            raise typer.Exit(code=_exit_code(exc)) from exc
        raise _fail(exc, where=str(file)) from exc

    logger.info("Running %s with seed %d", file, settings.seed)
    result = evaluate(
        compiled.term, seed=settings.seed, budget=settings.step_budget, trace=trace
    )
    if trace and not as_json:
        for event in result.trace:
            typer.echo(str(event))
    if result.value is not None:
        value = result.value
        monitored = effect_text(str(msens(mon(value))))
        if as_json:
            _emit_json(
                _program_document(
                    [], value=str(value.payload), stype=str(value.stype), monitored=monitored
                )
            )
        else:
            typer.echo(f"{value}  (monitored: {monitored})")
        return

    code = EXIT_VIOLATION if result.is_violation() else EXIT_RUNTIME_ERROR
    if as_json:
        _emit_json(_program_document([runtime_diagnostic(result)], stype=str(compiled.stype)))
    elif result.kind is OutcomeKind.BUDGET_EXHAUSTED:
        typer.secho(
            f"{file}: step budget exhausted after {result.steps} steps",
            fg=typer.colors.RED,
            err=True,
        )
    else:
        assert result.failure is not None
        span = f"{result.failure.span}: " if result.failure.span is not None else ""
        typer.secho(f"{file}:{span}{result.failure}", fg=typer.colors.RED, err=True)
    raise typer.Exit(code=code)


@app.command()
def repl(ctx: typer.Context) -> None:
    """Interactive session; declarations persist between lines."""
    configure_logging()
    Repl(_settings(ctx)).loop()


def _load_specs(path: Path) -> SpecLoader:
    return SpecLoader.from_path(path)


def _finish(passed: bool, payload: Dict[str, Any], as_json: bool, output: Optional[Path]) -> None:
    if as_json:
        _emit_json(payload)
    if output is not None:
        reports.write_output(output, payload)
    if not passed:
        raise typer.Exit(code=EXIT_VIOLATION)


@test_app.command("mp")
def test_mp(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="YAML specification or a closed .gsoul program."),
    pairs: Optional[int] = typer.Option(None, "--pairs", help="Neighbouring pairs per program."),
    delta: Optional[str] = typer.Option(None, "--delta", help="Override every program's delta."),
    ts: bool = typer.Option(False, "--ts", help="Termination-sensitive variant."),
    seed: Optional[int] = typer.Option(None, "--seed"),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write the report."),
) -> None:
    """Refute (termination-sensitive) gradual metric preservation on random pairs."""
    configure_logging()
    settings = _resolved(ctx, seed=seed, mp_pairs=pairs)
    check_fn = ts_mp_check if ts else mp_check
    try:
        specs = _load_specs(file).build_specs()
        if delta is not None:
            specs = [spec.with_delta(delta) for spec in specs]
        results = [
            check_fn(
                spec,
                settings.mp_pairs,
                settings.seed + offset,
                step_budget=settings.step_budget,
                value_range=settings.value_range,
                tolerance=settings.tolerance,
                workers=settings.workers,
            )
            for offset, spec in enumerate(specs)
        ]
    except GradualSensitivityError as exc:
        raise _fail(exc, where=str(file)) from exc
    if not as_json:
        typer.echo(reports.mp_table(results))
        for line in reports.violation_lines(results):
            typer.secho(line, fg=typer.colors.RED)
    payload = reports.document(
        "ts-mp" if ts else "mp", [r.to_dict() for r in results], seed=settings.seed
    )
    _finish(all(r.passed for r in results), payload, as_json, output)


@test_app.command("gg")
def test_gg(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="YAML corpus or a single .gsoul program."),
    widenings: Optional[int] = typer.Option(None, "--widenings"),
    kind: Optional[GuaranteeKind] = typer.Option(
        None, "--kind", help="Only one guarantee; both by default."
    ),
    seed: Optional[int] = typer.Option(None, "--seed"),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
) -> None:
    """Widen annotations at random and check the static and dynamic gradual guarantees."""
    configure_logging()
    settings = _resolved(ctx, seed=seed, widenings=widenings)
    kinds = [kind] if kind is not None else list(GuaranteeKind)
    try:
        corpus = _load_specs(file).build_specs()
        results = [
            gg_fuzz(
                which,
                corpus,
                settings.widenings,
                settings.seed,
                step_budget=settings.step_budget,
                value_range=settings.value_range,
                workers=settings.workers,
            )
            for which in kinds
        ]
    except GradualSensitivityError as exc:
        raise _fail(exc, where=str(file)) from exc
    if not as_json:
        for result in results:
            typer.echo(reports.gg_table(result))
            for example in result.counterexamples[:5]:
                typer.secho(f"  {example.reason}\n    {example.widened}", fg=typer.colors.RED)
    payload = reports.document("gg", [r.to_dict() for r in results], seed=settings.seed)
    _finish(all(r.passed for r in results), payload, as_json, output)


@test_app.command("evidence")
def test_evidence(
    ctx: typer.Context,
    trials: Optional[int] = typer.Option(None, "--trials"),
    law: Optional[str] = typer.Option(
        None, "--law", help=f"One of: {', '.join(LAWS)}; all by default."
    ),
    seed: Optional[int] = typer.Option(None, "--seed"),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
) -> None:
    """Fuzz the algebraic laws of interior, consistent transitivity and type join."""
    configure_logging()
    settings = _resolved(ctx, seed=seed, evidence_trials=trials)
    if law is not None and law not in LAWS:
        typer.secho(f"unknown law '{law}'; choose from {', '.join(LAWS)}", fg=typer.colors.RED)
        raise typer.Exit(code=EXIT_INPUT_ERROR)
    if law is None:
        results = evidence_laws(settings.evidence_trials, settings.seed, workers=settings.workers)
    else:
        results = [
            fuzz_law(law, settings.evidence_trials, settings.seed, workers=settings.workers)
        ]
    if not as_json:
        typer.echo(reports.fuzz_table(results))
        for result in results:
            for example in result.counterexamples[:5]:
                typer.secho(f"  {result.law}: {example}", fg=typer.colors.RED)
    payload = reports.document("evidence", [r.to_dict() for r in results], seed=settings.seed)
    _finish(all(r.passed for r in results), payload, as_json, output)


def _query(text: str) -> str:
    """Whole lambdas pass through; anything else is a body over ``v``."""
    return text if text.lstrip().startswith("fn") else query_source(text)


@dp_app.command("glm")
def dp_glm(
    ctx: typer.Context,
    query: str = typer.Option(..., "--query", "-q", help="Query lambda, or a body over v."),
    db: float = typer.Option(..., "--db", help="Database value."),
    eps: float = typer.Option(1.0, "--eps"),
    runs: int = typer.Option(1, "--runs", min=1, help="Independent releases to print."),
    seed: Optional[int] = typer.Option(None, "--seed"),
) -> None:
    """Release noisy answers of a query checked to be 1-sensitive at run time."""
    configure_logging()
    settings = _resolved(ctx, seed=seed)
    try:
        mechanism = GlmMechanism(_query(query), eps, step_budget=settings.step_budget)
    except GradualSensitivityError as exc:
        raise _fail(exc) from exc
    rng = np.random.default_rng(settings.seed)
    for _ in range(runs):
        result = mechanism.run(db, seed=draw_seed(rng))
        if result.value is None:
            typer.secho(str(result.failure), fg=typer.colors.RED, err=True)
            raise typer.Exit(code=EXIT_VIOLATION if result.is_violation() else EXIT_RUNTIME_ERROR)
        typer.echo(str(result.value.payload))


@dp_app.command("gat")
def dp_gat(
    ctx: typer.Context,
    queries: List[str] = typer.Option(..., "--query", "-q", help="Repeat once per query."),
    db: float = typer.Option(..., "--db"),
    thr: float = typer.Option(..., "--thr", help="Threshold."),
    eps: float = typer.Option(1.0, "--eps"),
    runs: int = typer.Option(1, "--runs", min=1),
    seed: Optional[int] = typer.Option(None, "--seed"),
) -> None:
    """Print the index of the first query above a noisy threshold (-1 when none)."""
    configure_logging()
    settings = _resolved(ctx, seed=seed)
    try:
        mechanism = GatMechanism(
            [_query(q) for q in queries], thr, eps, step_budget=settings.step_budget
        )
        skipped = mechanism.skipped(db)
        if skipped:
            typer.echo(f"skipped: {', '.join(str(i) for i in sorted(skipped))}")
        rng = np.random.default_rng(settings.seed)
        for _ in range(runs):
            typer.echo(str(mechanism.release(db, rng)))
    except GradualSensitivityError as exc:
        raise _fail(exc) from exc


@dp_app.command("verify")
def dp_verify(
    ctx: typer.Context,
    query: List[str] = typer.Option(..., "--query", "-q", help="Query; repeat for gat."),
    db1: float = typer.Option(..., "--db1"),
    db2: float = typer.Option(..., "--db2"),
    eps: float = typer.Option(1.0, "--eps", help="eps the mechanism runs with."),
    claimed_eps: Optional[float] = typer.Option(
        None, "--claimed-eps", help="eps to verify against; defaults to --eps."
    ),
    mechanism: str = typer.Option("glm", "--mechanism", help="glm or gat."),
    thr: float = typer.Option(0.0, "--thr", help="Threshold for gat."),
    samples: Optional[int] = typer.Option(None, "--samples"),
    bins: Optional[int] = typer.Option(None, "--bins"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
) -> None:
    """Histogram both output distributions and compare bin ratios against e^eps."""
    configure_logging()
    settings = _resolved(ctx, seed=seed, dp_samples=samples, dp_bins=bins)
    try:
        sampler: GlmMechanism | GatMechanism
        if mechanism == "glm":
            sampler = GlmMechanism(_query(query[0]), eps, step_budget=settings.step_budget)
        elif mechanism == "gat":
            sampler = GatMechanism(
                [_query(q) for q in query], thr, eps, step_budget=settings.step_budget
            )
        else:
            raise ParameterError(f"unknown mechanism '{mechanism}'", suggestion="glm or gat")
        report = dp_ratio_test(
            sampler,
            db1,
            db2,
            claimed_eps if claimed_eps is not None else eps,
            settings.dp_samples,
            settings.dp_bins,
            tau=settings.dp_tau,
            min_bin=settings.dp_min_bin,
            seed=settings.seed,
            workers=settings.workers,
        )
    except GradualSensitivityError as exc:
        raise _fail(exc) from exc
    payload = reports.document("dp", [report.to_dict()], seed=settings.seed)
    if as_json:
        _emit_json(payload)
    else:
        typer.echo(reports.dp_table(report))
    if output is not None:
        reports.write_output(output, payload)
    if report.verdict is Verdict.FAIL:
        raise typer.Exit(code=EXIT_VIOLATION)
    if report.verdict is Verdict.INCONCLUSIVE:
        raise typer.Exit(code=EXIT_RUNTIME_ERROR)


@app.callback(invoke_without_command=True)
def main_command(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(
        None, "--config", help="Settings file; defaults to ./gsens.yaml when present."
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
) -> None:
    """Load settings for every subcommand, or print help when none is given."""
    if verbose:
        configure_logging(level="DEBUG", force=True)
    try:
        ctx.obj = load_settings(config)
    except SettingsError as exc:
        raise _fail(exc) from exc
    if ctx.invoked_subcommand:
        return
    typer.echo(ctx.get_help())
    raise typer.Exit(code=EXIT_OK)


def main() -> None:
    # Allow `gsens program.gsoul` by inserting the `run` subcommand when the first
    # argument looks like a file path.
    if len(sys.argv) > 1:
        first = sys.argv[1]
        if first not in COMMANDS and not first.startswith("-"):
            sys.argv.insert(1, "run")
    app()


if __name__ == "__main__":
    main()
