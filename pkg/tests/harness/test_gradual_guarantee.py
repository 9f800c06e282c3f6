from pathlib import Path

import numpy as np
import pytest

from gradual_sensitivity.calculus.precision import st_precision
from gradual_sensitivity.checker.elaborator import TypeEnv, compile_source, elaborate
from gradual_sensitivity.enums import GuaranteeKind
from gradual_sensitivity.harness import MPSpec, gg_fuzz, value_precision, widen_program
from gradual_sensitivity.harness.gradual_guarantee import widening_sites
from gradual_sensitivity.io.loader import SpecLoader
from gradual_sensitivity.machine import evaluate
from gradual_sensitivity.syntax import ast
from gradual_sensitivity.syntax.desugar import desugar
from gradual_sensitivity.syntax.parser import parse_source, parse_type

CORPUS = Path(__file__).resolve().parents[2] / "corpus" / "mp_corpus.yaml"


def expr_of(source):
    return desugar(parse_source(source))


def test_widening_sites_count_annotations_and_parameters():
    expr = expr_of("let y : Number[2r] = x; (y :: Number[3r]) + (fn (a: Number[r]) => a)(x)")
    assert widening_sites(expr) == 3
    assert widening_sites(expr_of("fn (a: Number) => a")) == 0


def test_resource_parameters_are_not_widened():
    expr = expr_of("def double(res n: Number): Number[2n] = n + n; double(x)")
    assert widening_sites(expr) == 1


def test_lambda_domains_are_widened():
    expr = expr_of("(fn (a: Number[r]) => a + a)(x)")
    env = TypeEnv.of({"x": parse_type("Number[r]")})
    _, precise = elaborate(expr, env)
    rng = np.random.default_rng(8)
    for _ in range(20):
        widened = widen_program(expr, rng)
        assert isinstance(widened, ast.Call) and isinstance(widened.fn, ast.Lambda)
        assert widened.fn.param_type != parse_type("Number[r]")
        assert st_precision(parse_type("Number[r]"), widened.fn.param_type)
        _, imprecise = elaborate(widened, env)
        assert st_precision(precise, imprecise)
    assert widening_sites(expr_of("1 + 2")) == 0


def test_widened_program_is_less_precise():
    expr = expr_of("let res r = 1; (r + r) :: Number[2r]")
    rng = np.random.default_rng(4)
    for _ in range(20):
        widened = widen_program(expr, rng)
        assert widened != expr
        _, precise = elaborate(expr)
        _, imprecise = elaborate(widened)
        assert st_precision(precise, imprecise)


def test_program_without_annotations_is_unchanged():
    expr = expr_of("1 + 2")
    assert widen_program(expr, np.random.default_rng(0)) is expr


def test_value_precision_of_widened_run():
    precise = evaluate(compile_source("let res r = 1; (r + r) :: Number[2r]").term).value
    imprecise = evaluate(compile_source("let res r = 1; (r + r) :: Number[?r]").term).value
    assert value_precision(precise, imprecise)
    assert not value_precision(imprecise, precise)


@pytest.mark.parametrize("kind", list(GuaranteeKind))
def test_guarantees_hold_on_corpus(kind):
    specs = SpecLoader.from_yaml_path(CORPUS).build_specs()
    report = gg_fuzz(kind, specs, widenings=60, seed=11)
    assert report.passed, [c.to_dict() for c in report.counterexamples]
    assert report.programs == len(specs)
    assert report.widenings == 60
    assert report.checked > 0


def test_corpus_without_annotations_checks_nothing():
    spec = MPSpec(name="plain", source="x + 1", env={"x": "Number[r]"})
    report = gg_fuzz(GuaranteeKind.STATIC, [spec], widenings=5, seed=0)
    assert report.widenings == 0
    assert report.passed


def test_dynamic_guarantee_holds_on_full_corpus():
    specs = SpecLoader.from_yaml_path(CORPUS).build_specs()
    report = gg_fuzz(GuaranteeKind.DYNAMIC, specs, widenings=1000, seed=20240601)
    assert report.passed, [c.to_dict() for c in report.counterexamples[:3]]


def test_recovered_runs_carry_no_dynamic_obligation():
    specs = SpecLoader.from_yaml_path(CORPUS).build_specs()
    fallback = [spec for spec in specs if spec.name == "try_fallback"]
    assert len(fallback) == 1
    report = gg_fuzz(GuaranteeKind.DYNAMIC, fallback, widenings=200, seed=11)
    assert report.widenings == 200
    assert report.passed, [c.to_dict() for c in report.counterexamples[:3]]
    assert report.checked == 0
