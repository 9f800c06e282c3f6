import pytest

from gradual_sensitivity.calculus.evidence_ops import ctrans, interior, meet_types
from gradual_sensitivity.calculus.precision import ev_precision, st_precision
from gradual_sensitivity.calculus.subtyping import consistent_subtyping
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.syntax.parser import parse_type


def ev(lhs, rhs):
    return Evidence(parse_type(lhs), parse_type(rhs))


def test_interior_of_unknown_against_exact():
    assert interior(parse_type("Number[?r]"), parse_type("Number[1r]")) == ev(
        "Number[0..1r]", "Number[1r]"
    )


def test_interior_is_undefined_when_subtyping_is_refuted():
    assert interior(parse_type("Number[2r]"), parse_type("Number[1r]")) is None
    assert interior(parse_type("Number"), parse_type("Boolean")) is None


def test_interior_swaps_arrow_domains():
    evidence = interior(
        parse_type("Number[?r] -> Number[r]"), parse_type("Number[2r] -> Number[?r]")
    )
    assert evidence == ev("Number[2..inf r] -> Number[r]", "Number[2r] -> Number[1..inf r]")


def test_interior_of_static_pair_is_itself():
    evidence = interior(parse_type("Number[r]"), parse_type("Number[3r]"))
    assert evidence == ev("Number[r]", "Number[3r]")


def test_ctrans_refines_through_the_middle():
    first = ev("Number[?r]", "Number[?r]")
    second = ev("Number[2r]", "Number[2r]")
    assert ctrans(first, second) == ev("Number[0..2r]", "Number[2r]")


def test_ctrans_fails_when_bounds_cross():
    assert ctrans(ev("Number[3r]", "Number[3r]"), ev("Number[1r]", "Number[1r]")) is None


@pytest.mark.parametrize("left_first", [True, False])
def test_three_step_chain_is_undefined_in_either_association(left_first):
    a = ev("Number[3r]", "Number[5r]")
    b = ev("Number[5r]", "Number[[5,inf]r]")
    c = ev("Number[[0,4]r]", "Number[4r]")
    if left_first:
        ab = ctrans(a, b)
        assert ab is not None
        assert ctrans(ab, c) is None
    else:
        assert ctrans(b, c) is None


def test_ctrans_result_is_more_precise_than_inputs_outer_components():
    first = ev("Number[0..3r]", "Number[1..5r]")
    second = ev("Number[0..4r]", "Number[2..6r]")
    composed = ctrans(first, second)
    assert composed is not None
    assert st_precision(composed.lhs, first.lhs)
    assert st_precision(composed.rhs, second.rhs)


def test_consistent_subtyping_examples():
    assert consistent_subtyping(parse_type("Number[?r]"), parse_type("Number[0r]"))
    assert consistent_subtyping(parse_type("Number[r]"), parse_type("Number[2r]"))
    assert not consistent_subtyping(parse_type("Number[3r]"), parse_type("Number[1..2r]"))
    assert consistent_subtyping(
        parse_type("Number[2r] -> Number"), parse_type("Number[r] -> Number[?s]")
    )
    assert not consistent_subtyping(
        parse_type("Number[r] -> Number"), parse_type("Number[2r] -> Number")
    )


def test_precision_orders_evidence_componentwise():
    precise = ev("Number[1r]", "Number[2r]")
    imprecise = ev("Number[?r]", "Number[?r]")
    assert ev_precision(precise, imprecise)
    assert not ev_precision(imprecise, precise)


def test_meet_of_intervals():
    assert meet_types(parse_type("Number[0..3r]"), parse_type("Number[2..5r]")) == parse_type(
        "Number[2..3r]"
    )
    assert meet_types(parse_type("Number[0..1r]"), parse_type("Number[2..5r]")) is None
