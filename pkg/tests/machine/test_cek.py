import pytest

from gradual_sensitivity.checker.elaborator import compile_source
from gradual_sensitivity.enums import OutcomeKind, RuntimeErrorKind
from gradual_sensitivity.errors import ParameterError
from gradual_sensitivity.machine import Machine, RecordingNoise, evaluate
from gradual_sensitivity.machine.noise import LaplaceNoise
from gradual_sensitivity.models.values import mon, msens

LOOP = "let loop = fix (f: Number -> Number) => fn (n: Number) => f(n); loop(1)"


def run(source, **options):
    return evaluate(compile_source(source).term, **options)


def run_file(corpus_dir, name, **options):
    return run((corpus_dir / name).read_text(encoding="utf-8"), **options)


def test_arithmetic():
    result = run("let x = 2; x * 3 + 1")
    assert result.ok
    assert result.value.constant == 7.0


def test_scale_reports_monitored_sensitivity(corpus_dir):
    result = run_file(corpus_dir, "scale_two.gsoul")
    assert result.ok
    assert str(result.value) == "6 : Number[?r]"
    assert str(msens(mon(result.value))) == "2r"


@pytest.mark.parametrize(
    "name, violation",
    [
        ("table/l_unknown_apply_f.gsoul", True),
        ("table/l_unknown_apply_g.gsoul", False),
        ("table/l_0_3r_apply_h.gsoul", False),
        ("table/l_1_3r_apply_g.gsoul", False),
    ],
)
def test_list_elements_checked_against_parameter(corpus_dir, name, violation):
    result = run_file(corpus_dir, name)
    assert result.is_violation() is violation
    assert result.ok is not violation


def test_abstraction_body_is_refuted_before_instantiation(corpus_dir):
    result = run_file(corpus_dir, "delayed_refutation.gsoul", trace=True)
    assert "r-inst" not in [event.rule for event in result.trace]
    assert result.kind is OutcomeKind.ERROR
    assert result.is_violation()
    assert result.failure.evidence is not None


def test_scale_respects_declared_bound(corpus_dir):
    assert run_file(corpus_dir, "scale_10.gsoul").ok
    assert run_file(corpus_dir, "scale_11.gsoul").is_violation()


def test_budget_exhaustion():
    result = run(LOOP, budget=500)
    assert result.kind is OutcomeKind.BUDGET_EXHAUSTED
    assert result.steps == 500
    assert result.value is None and result.failure is None


def test_try_catches_sensitivity_violations():
    source = "let res r = 1; try { ((r + r) :: Number[?r]) :: Number[1r] } catch { 0 }"
    result = run(source, trace=True)
    assert result.ok
    assert result.value.constant == 0.0
    assert "r-catch" in [event.rule for event in result.trace]


def test_try_catches_out_of_range_index():
    result = run("try { List(1, 2).get(5) } catch { 9 }")
    assert result.value.constant == 9.0


def test_division_by_zero_escapes_try():
    result = run("try { 1 / 0 } catch { 0 }")
    assert result.kind is OutcomeKind.ERROR
    assert result.failure.kind is RuntimeErrorKind.DIVISION_BY_ZERO


def test_uncaught_index_error():
    result = run("List(1, 2).get(2)")
    assert result.failure.kind is RuntimeErrorKind.USER_ERROR
    assert "out of range" in result.failure.message


def test_index_of_finds_first_match():
    result = run("List(-1, 3, 5).indexOf(fn (a: Number) => a > 0)")
    assert result.value.constant == 1.0
    missing = run("List(-1, -3).indexOf(fn (a: Number) => a > 0)")
    assert missing.value.constant == -1.0


def test_trace_records_rules_in_step_order():
    result = run("(fn (a: Number) => a + 1)(2)", trace=True)
    rules = [event.rule for event in result.trace]
    assert "r-app" in rules and "r-op" in rules
    assert rules.index("r-app") < rules.index("r-op")
    steps = [event.step for event in result.trace]
    assert steps == sorted(steps)
    assert run("1 + 1").trace == []


def test_laplace_uses_requested_scale():
    noise = RecordingNoise()
    result = run("laplace(3, 2, 4)", noise=noise)
    assert result.value.constant == 3.0
    assert noise.scales == [0.5]


def test_seeded_noise_is_reproducible():
    first = run("laplace(0, 1, 1)", seed=11)
    second = run("laplace(0, 1, 1)", seed=11)
    assert first.value.constant == second.value.constant
    assert first.value.constant != 0.0


def test_noise_rejects_bad_scale():
    with pytest.raises(ParameterError):
        LaplaceNoise(3).sample(0.0)


def test_non_positive_eps_is_a_user_error():
    result = run("laplace(1, 1, 0)")
    assert result.failure.kind is RuntimeErrorKind.USER_ERROR


def test_stepping_by_hand_matches_run():
    term = compile_source("let x = 1; x + 2").term
    machine = Machine(term)
    result = None
    while result is None:
        result = machine.step()
    assert result.value.constant == 3.0
    assert machine.step() is result
    assert evaluate(term).steps == result.steps


def test_audit_accepts_well_formed_runs(corpus_dir):
    assert run_file(corpus_dir, "scale_two.gsoul", audit=True).ok
    assert run_file(corpus_dir, "glm.gsoul", audit=True, seed=3).ok
