import pytest

from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import (
    FreshNames,
    ResourceVar,
    SensEnv,
    StaticSensEnv,
    fresh_resource,
)
from gradual_sensitivity.models.types import (
    ForallType,
    RecVar,
    SensType,
    real,
    add_effect,
    free_recvars,
    free_resources,
    is_base,
    join_effect,
    subst_resource,
)
from gradual_sensitivity.models.values import ConstV, Env, Value
from gradual_sensitivity.syntax.parser import parse_effect, parse_type

R = ResourceVar("r")
S = ResourceVar("s")


@pytest.mark.parametrize(
    "text",
    [
        "Number",
        "Number[2r + ?s]",
        "Number[r] -> Number[2r]",
        "(Number[r] -> Number)[s]",
        "List<Number[[0,3]r]>",
        "(Number, Boolean[r])",
        "forall r. Number[r] -> Number[r]",
    ],
)
def test_types_print_as_parsed(text):
    assert str(parse_type(text)) == text


def test_free_resources_respect_binders():
    stype = parse_type("forall r. Number[r] -> Number[r + s]")
    assert free_resources(stype) == frozenset({S})
    assert free_recvars(parse_type("mu a. (Number, a)")) == frozenset()


def test_substitution_scales_effects():
    stype = parse_type("Number[2r] -> Number[r + s]")
    assert subst_resource(stype, R, parse_effect("3s")) == parse_type(
        "Number[6s] -> Number[4s]"
    )


def test_substitution_does_not_touch_bound_resources():
    stype = parse_type("forall r. Number[r]")
    assert subst_resource(stype, R, parse_effect("s")) == stype


def test_substitution_renames_capturing_binder():
    stype = parse_type("forall s. Number[s] -> Number[r]")
    first = subst_resource(stype, R, parse_effect("s"))
    second = subst_resource(stype, R, parse_effect("s"))
    assert first == second
    assert isinstance(first, SensType) and isinstance(first.ty, ForallType)
    assert first.ty.resource == ResourceVar("s~1")
    assert free_resources(first) == frozenset({S})


def test_fresh_names_skip_taken_names():
    taken = {ResourceVar("r~1"), ResourceVar("r~2")}
    assert fresh_resource("r", taken) == ResourceVar("r~3")
    assert fresh_resource("r~7", set()) == ResourceVar("r~1")
    names = FreshNames()
    issued = {names.resource("r", set()) for _ in range(3)}
    assert issued == {ResourceVar("r~1"), ResourceVar("r~2"), ResourceVar("r~3")}
    assert names.resource("r", {ResourceVar("r~4")}) == ResourceVar("r~5")


def test_effect_helpers():
    stype = parse_type("Number[r]")
    assert add_effect(stype, parse_effect("r + s")) == parse_type("Number[2r + s]")
    assert join_effect(stype, parse_effect("2r")) == parse_type("Number[2r]")
    assert add_effect(RecVar("a"), parse_effect("r")) is None
    assert add_effect(RecVar("a"), SensEnv()) == RecVar("a")
    assert is_base(stype, BaseKind.REAL)
    assert not is_base(parse_type("Number -> Number"))


def test_evidence_monitors_right_lower_bounds():
    evidence = Evidence(parse_type("Number[0..2r]"), parse_type("Number[1..3r + ?s]"))
    assert evidence.monitored() == StaticSensEnv.of({R: 1.0})
    assert str(evidence) == "⟨Number[[0,2]r], Number[[1,3]r + ?s]⟩"
    with pytest.raises(ValueError, match="no top-level effect"):
        Evidence(RecVar("a"), RecVar("a")).effects()


def number(x):
    return Value(Evidence(real(), real()), ConstV(x), real())


def test_environment_shadows_and_never_mutates():
    empty = Env.empty()
    outer = empty.extend("x", number(1.0))
    inner = outer.extend("x", number(2.0))
    assert inner.lookup("x") == number(2.0)
    assert outer.lookup("x") == number(1.0)
    assert empty.lookup("x") is None
    assert empty.is_empty
    assert [name for name, _ in inner] == ["x", "x"]
