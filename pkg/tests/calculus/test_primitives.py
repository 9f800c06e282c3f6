import pytest

from gradual_sensitivity.calculus.primitives import apply_prim, iop_evidence, iop_type
from gradual_sensitivity.calculus.projections import stype_join
from gradual_sensitivity.enums import PrimOp
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.syntax.parser import parse_type


def t(text):
    return parse_type(text)


def test_addition_adds_effects():
    assert iop_type(PrimOp.ADD, [t("Number[r]"), t("Number[2r + s]")]) == t("Number[3r + s]")
    assert iop_type(PrimOp.SUB, [t("Number[?r]"), t("Number[r]")]) == t("Number[1..inf r]")


def test_negation_keeps_effect():
    assert iop_type(PrimOp.NEG, [t("Number[2r]")]) == t("Number[2r]")
    assert iop_type(PrimOp.NOT, [t("Boolean[s]")]) == t("Boolean[s]")


@pytest.mark.parametrize("op", [PrimOp.MUL, PrimOp.DIV])
def test_scaled_arithmetic_is_infinitely_sensitive(op):
    assert iop_type(op, [t("Number[r]"), t("Number")]) == t("Number[inf r]")
    assert iop_type(op, [t("Number"), t("Number")]) == t("Number")


def test_comparisons_return_scaled_booleans():
    assert iop_type(PrimOp.LT, [t("Number[r]"), t("Number[s]")]) == t("Boolean[inf r + inf s]")
    assert iop_type(PrimOp.EQ, [t("Boolean[r]"), t("Boolean")]) == t("Boolean[inf r]")


def test_ill_typed_applications_are_undefined():
    assert iop_type(PrimOp.ADD, [t("Number"), t("Boolean")]) is None
    assert iop_type(PrimOp.EQ, [t("Number"), t("Boolean")]) is None
    assert iop_type(PrimOp.AND, [t("Number"), t("Number")]) is None
    assert iop_type(PrimOp.NEG, [t("Number"), t("Number")]) is None


def test_operator_evidence_lifts_both_components():
    first = Evidence(t("Number[0..1r]"), t("Number[1r]"))
    second = Evidence(t("Number[s]"), t("Number[s]"))
    assert iop_evidence(PrimOp.ADD, [first, second]) == Evidence(
        t("Number[0..1r + s]"), t("Number[r + s]")
    )
    with pytest.raises(ValueError, match="not defined"):
        iop_evidence(PrimOp.AND, [first, second])


def test_semantics():
    assert apply_prim(PrimOp.ADD, [1.0, 2.0]) == 3.0
    assert apply_prim(PrimOp.GE, [1.0, 2.0]) is False
    assert apply_prim(PrimOp.NEG, [2.0]) == -2.0
    with pytest.raises(ZeroDivisionError):
        apply_prim(PrimOp.DIV, [1.0, 0.0])


def test_join_widens_effects_and_narrows_domains():
    assert stype_join(t("Number[r]"), t("Number[2r]")) == t("Number[2r]")
    assert stype_join(
        t("Number[2r] -> Number[r]"), t("Number[r] -> Number[s]")
    ) == t("Number[r] -> Number[r + s]")
    assert stype_join(t("Number"), t("Boolean")) is None
