import pytest

from gradual_sensitivity.checker.elaborator import compile_source
from gradual_sensitivity.enums import OutcomeKind
from gradual_sensitivity.machine import RecordingNoise, agree, evaluate, reference_evaluate
from gradual_sensitivity.models.results import RunResult

SOURCES = [
    "let x = 2; x * 3 + 1",
    "let res r = 4; (fn (a: Number[r]) => a + a)(r)",
    "def add(res a: Number, res b: Number): Number[a + b] = a + b; let res r = 1; add(r, r)",
    "let p = (1, true); if snd(p) then fst(p) else 0",
    "case inr<Number>(2) of { inl a => a | inr b => b * 2 }",
    "unfold(fold<mu t. Number>(5)) + 1",
    "List(1, 2, 3).get(1) + List(4).length()",
    "List(-1, 3).indexOf(fn (a: Number) => a > 0)",
    "let res r = 1; try { ((r + r) :: Number[?r]) :: Number[1r] } catch { 0 }",
    "try { 1 / 0 } catch { 0 }",
    "laplace(3, 1, 2)",
]

CORPUS = [
    "scale_two.gsoul",
    "scale_10.gsoul",
    "scale_11.gsoul",
    "delayed_refutation.gsoul",
    "glm.gsoul",
    "table/l_3r_apply_h.gsoul",
    "table/l_unknown_apply_f.gsoul",
    "table/l_1_3r_apply_g.gsoul",
]


def both(source):
    term = compile_source(source).term
    return (
        evaluate(term, noise=RecordingNoise()),
        reference_evaluate(term, noise=RecordingNoise()),
    )


@pytest.mark.parametrize("source", SOURCES)
def test_machine_agrees_with_substitution_oracle(source):
    machine, oracle = both(source)
    assert agree(machine, oracle), (machine, oracle)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_programs_agree(corpus_dir, name):
    machine, oracle = both((corpus_dir / name).read_text(encoding="utf-8"))
    assert agree(machine, oracle)
    assert machine.kind is oracle.kind


def test_oracle_reports_violations(corpus_dir):
    _, oracle = both((corpus_dir / "delayed_refutation.gsoul").read_text(encoding="utf-8"))
    assert oracle.is_violation()


def test_exhausted_runs_agree_with_anything():
    exhausted = RunResult(OutcomeKind.BUDGET_EXHAUSTED)
    finished, _ = both("1 + 1")
    assert agree(exhausted, finished)
    assert agree(finished, exhausted)


def test_different_values_disagree():
    one, _ = both("1 + 1")
    other, _ = both("1 + 2")
    assert not agree(one, other)
