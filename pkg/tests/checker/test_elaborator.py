import pytest

from gradual_sensitivity.checker.elaborator import TypeEnv, compile_source
from gradual_sensitivity.checker.validator import validate
from gradual_sensitivity.checker.well_formed import well_formed
from gradual_sensitivity.errors import SensitivityTypeError
from gradual_sensitivity.models.sensitivity import ResourceVar
from gradual_sensitivity.syntax.parser import parse_type

R = ResourceVar("r")


def make_env(**types):
    return TypeEnv.of({name: parse_type(text) for name, text in types.items()})


def type_of(source, **types):
    return compile_source(source, make_env(**types)).stype


@pytest.mark.parametrize(
    "source, expected",
    [
        ("x + x", "Number[2r]"),
        ("x + y + y", "Number[r + 2s]"),
        ("x * 2", "Number[inf r]"),
        ("x > 0", "Boolean[inf r]"),
        ("-x", "Number[r]"),
        ("(x + x) :: Number[?r]", "Number[?r]"),
        ("fn (a: Number[s]) => a + x", "Number[s] -> Number[r + s]"),
        ("(x, y)", "(Number[r], Number[s])"),
        ("List(x, y + y).length()", "Number"),
        ("List(x, y + y)", "List<Number[r + 2s]>"),
        ("if b then x else y", "Number[r + s + t]"),
    ],
)
def test_expression_types(source, expected):
    stype = type_of(source, x="Number[r]", y="Number[s]", b="Boolean[t]")
    assert stype == parse_type(expected)


def test_def_instantiates_resources_from_arguments():
    source = "def double(res n: Number): Number[2n] = n + n; double(x)"
    assert type_of(source, x="Number[3r]") == parse_type("Number[6r]")


def test_def_with_two_resource_parameters():
    source = "def add(res a: Number, res b: Number): Number[a + b] = a + b; add(x, x)"
    assert type_of(source, x="Number[r]") == parse_type("Number[2r]")


def test_explicit_resource_abstraction_and_application():
    source = "(fn [s] => fn (a: Number[s]) => a + a)[2r]"
    assert type_of(source, x="Number[r]") == parse_type("Number[2r] -> Number[4r]")


def test_let_res_brings_resource_into_scope():
    assert compile_source("let res r = 3; r + r").stype == parse_type("Number[2r]")


def test_scale_program_has_unknown_sensitivity(corpus_dir):
    source = (corpus_dir / "scale_two.gsoul").read_text(encoding="utf-8")
    assert compile_source(source).stype == parse_type("Number[?r]")


@pytest.mark.parametrize("name", ["glm.gsoul", "gat.gsoul"])
def test_mechanisms_release_untainted_numbers(corpus_dir, name):
    source = (corpus_dir / name).read_text(encoding="utf-8")
    assert compile_source(source).stype == parse_type("Number")


def test_index_of_scales_list_and_predicate_effects():
    source = "List(x).indexOf(fn (a: Number[r]) => a > 0)"
    assert type_of(source, x="Number[r]") == parse_type("Number[inf r]")


def test_try_joins_branches():
    source = "try { x :: Number[2r] } catch { y }"
    assert type_of(source, x="Number[r]", y="Number[s]") == parse_type("Number[2r + s]")


def test_laplace_result_is_untainted():
    assert type_of("laplace(x, 1, 1)", x="Number[r]") == parse_type("Number")


def test_refuted_ascription():
    with pytest.raises(SensitivityTypeError, match="plausibility refuted") as info:
        type_of("(x + x) :: Number[1r]", x="Number[r]")
    assert info.value.code == "E002"


def test_constructor_mismatch():
    with pytest.raises(SensitivityTypeError, match="type constructor mismatch") as info:
        type_of("x :: Boolean", x="Number[r]")
    assert info.value.code == "E003"


def test_argument_too_sensitive_for_parameter():
    source = "def f(a: Number[0r]): Unit = unit; f(x)"
    with pytest.raises(SensitivityTypeError):
        type_of(source, x="Number[r]")


def test_unknown_argument_passes_statically():
    source = "def f(a: Number[0r]): Unit = unit; f(x :: Number[?r])"
    assert type_of(source, x="Number[r]") == parse_type("Unit")


def test_unbound_variable():
    with pytest.raises(SensitivityTypeError, match="unbound variable 'z'") as info:
        type_of("z + 1")
    assert info.value.code == "E001"


def test_unbound_resource_in_annotation():
    with pytest.raises(SensitivityTypeError, match="not in scope") as info:
        type_of("fn (a: Number[q]) => a")
    assert info.value.code == "E005"
    assert info.value.suggestion


def test_branches_of_different_types():
    with pytest.raises(SensitivityTypeError, match="if branches disagree"):
        type_of("if true then 1 else false")


def test_fix_needs_function_body():
    with pytest.raises(SensitivityTypeError, match="fix needs a function body"):
        type_of("fix (f: Number) => 1")


def test_well_formedness():
    assert well_formed({R}, parse_type("Number[r] -> Number"))
    assert not well_formed(set(), parse_type("Number[r]"))


@pytest.mark.parametrize(
    "source",
    [
        "x + x",
        "(x :: Number[?r]) :: Number[2r]",
        "def double(res n: Number): Number[2n] = n + n; double(x)",
        "case inl<Number>(x) of { inl a => a | inr c => c + c }",
        "let l = List(x, x); l.get(1)",
        "try { (x :: Number[?r]) :: Number[0r] } catch { 0 }",
    ],
)
def test_elaborated_terms_validate(source):
    env = make_env(x="Number[r]")
    compiled = compile_source(source, env)
    assert validate(compiled.term, env) == compiled.stype
