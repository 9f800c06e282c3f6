from pathlib import Path

import pytest

from gradual_sensitivity.checker.elaborator import compile_source
from gradual_sensitivity.errors import HarnessError
from gradual_sensitivity.harness import MPSpec, mp_check, prepare, ts_mp_check
from gradual_sensitivity.harness.inputs import InputPair
from gradual_sensitivity.harness.metric_preservation import MetricPreservation, adequate
from gradual_sensitivity.io.loader import SpecLoader
from gradual_sensitivity.machine import evaluate

PAIRS = 25
CORPUS = Path(__file__).resolve().parents[2] / "corpus" / "mp_corpus.yaml"


def load(corpus_dir, name):
    return SpecLoader.from_yaml_path(corpus_dir / name).build_specs()


def corpus_specs():
    return SpecLoader.from_yaml_path(CORPUS).build_specs()


def test_x_plus_2y_bound(corpus_dir):
    (spec,) = load(corpus_dir, "x_plus_2y.yaml")
    checker = MetricPreservation(prepare(spec), seed=1)
    assert checker.bound == 10.0
    report = mp_check(spec, PAIRS, seed=1)
    assert report.passed
    assert report.trials == PAIRS
    assert report.successes == PAIRS
    assert report.max_slack >= -1e-9


@pytest.mark.parametrize("spec", corpus_specs(), ids=lambda spec: spec.name)
def test_corpus_preserves_metrics(spec):
    report = mp_check(spec, PAIRS, seed=20240601)
    assert report.passed, [v.to_dict() for v in report.violations]


@pytest.mark.parametrize(
    "spec", [s for s in corpus_specs() if s.bounded], ids=lambda spec: spec.name
)
def test_bounded_corpus_preserves_metrics_with_termination(spec):
    report = ts_mp_check(spec, PAIRS, seed=7)
    assert report.passed, [v.to_dict() for v in report.violations]
    assert report.termination_mismatches == 0


def test_bounded_corpus_is_large_enough():
    bounded = [spec for spec in corpus_specs() if spec.bounded]
    assert len(bounded) >= 20
    assert all(prepare(spec).bounded() for spec in bounded)


def test_unbounded_guard_only_passes_insensitive_check(corpus_dir):
    (spec,) = load(corpus_dir, "ts_unbounded.yaml")
    report = mp_check(spec, 50, seed=3)
    assert report.passed
    assert report.error_pairs > 0
    with pytest.raises(HarnessError, match="bounded"):
        ts_mp_check(spec, 50, seed=3)


def test_lying_claim_is_caught():
    spec = MPSpec(name="liar", source="x + x", env={"x": "Number[r]"}, claimed="r")
    report = mp_check(spec, 40, seed=5)
    assert not report.passed
    assert report.violations[0].reason == "distance exceeds bound"
    assert report.violations[0].distance > report.violations[0].bound


def test_reports_are_reproducible():
    spec = MPSpec(name="add", source="x + y", env={"x": "Number[r]", "y": "Number[s]"})
    first = mp_check(spec, 10, seed=9).to_dict()
    second = mp_check(spec, 10, seed=9, workers=3).to_dict()
    assert first == second


def test_termination_mismatch_is_a_violation():
    spec = MPSpec(name="pass", source="x", env={"x": "Number[r]"}, bounded=True)
    checker = MetricPreservation(prepare(spec), seed=0, termination_sensitive=True)
    done = evaluate(compile_source("1").term)
    failed = evaluate(compile_source("1 / 0").term)
    report = checker.judge(InputPair({}, {}, {}), done, failed)
    assert report.termination_mismatches == 1
    assert report.violations[0].reason == "termination mismatch"


def test_adequacy_of_monitored_sensitivity(corpus_dir):
    source = (corpus_dir / "scale_two.gsoul").read_text(encoding="utf-8")
    assert adequate(evaluate(compile_source(source).term).value)
