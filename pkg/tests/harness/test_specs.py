import pytest
from pydantic import ValidationError

from gradual_sensitivity.errors import HarnessError, SensitivityTypeError
from gradual_sensitivity.harness import MPSpec, prepare
from gradual_sensitivity.models.sensitivity import ResourceVar, StaticSensEnv
from gradual_sensitivity.syntax.parser import parse_effect

R = ResourceVar("r")


def spec(**overrides):
    data = {"name": "p", "source": "x + x", "env": {"x": "Number[r]"}}
    data.update(overrides)
    return MPSpec(**data)


def test_defaults_come_from_the_typed_effect():
    prepared = prepare(spec())
    assert prepared.claimed == parse_effect("2r")
    assert prepared.delta == StaticSensEnv.of({R: 1.0})
    assert prepared.bounded()


def test_fixed_helpers_are_bound_by_lets():
    text = spec(source="g(x)", fixed={"g": "fn (a: Number[r]) => a + a"}).program_source()
    assert text == "let g = fn (a: Number[r]) => a + a;\ng(x)"


def test_unknown_annotations_make_a_spec_unbounded():
    assert not prepare(spec(source="x :: Number[?r]")).bounded()
    assert not prepare(spec(claimed="?r")).bounded()
    assert not prepare(spec(source="x", env={"x": "Number[inf r]"})).bounded()
    assert not prepare(
        spec(source="g(x) + 0", fixed={"g": "fn (a: Number[r]) => a :: Number[?r]"})
    ).bounded()


def test_ranges_must_be_ordered_and_known():
    with pytest.raises(ValidationError, match="low < high"):
        spec(ranges={"x": (1.0, 1.0)})
    with pytest.raises(ValidationError, match="unknown variables"):
        spec(ranges={"y": (0.0, 1.0)})


def test_free_and_fixed_names_are_disjoint():
    with pytest.raises(ValidationError, match="both free and fixed"):
        spec(fixed={"x": "1"})


@pytest.mark.parametrize(
    "overrides, message",
    [
        ({"delta": "?r"}, "exact distances"),
        ({"delta": "s"}, "not in scope"),
        ({"env": {"x": "Number["}}, "cannot parse type"),
        ({"claimed": "r +"}, "claimed effect"),
        ({"source": "fn (a: Number) => a + x"}, "not a base type"),
    ],
)
def test_prepare_errors(overrides, message):
    with pytest.raises(HarnessError, match=message):
        prepare(spec(**overrides))


def test_type_errors_propagate():
    with pytest.raises(SensitivityTypeError):
        prepare(spec(source="x :: Boolean"))


def test_with_delta_copies():
    original = spec()
    changed = original.with_delta("3r")
    assert changed.delta == "3r"
    assert original.delta is None
