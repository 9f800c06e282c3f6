import pytest

from gradual_sensitivity.enums import PrimOp
from gradual_sensitivity.errors import LexError, ParseError
from gradual_sensitivity.models.sensitivity import INF, GradualSens, ResourceVar, SensEnv
from gradual_sensitivity.models.types import ArrowType, ListType, SensType, effect_of
from gradual_sensitivity.syntax import ast
from gradual_sensitivity.syntax.desugar import audit_scopes, desugar
from gradual_sensitivity.syntax.lexer import tokenize
from gradual_sensitivity.syntax.parser import parse_effect, parse_source, parse_type
from gradual_sensitivity.syntax.printer import pretty_program
from gradual_sensitivity.syntax.tokens import TokenKind

R = ResourceVar("r")
S = ResourceVar("s")


def result_of(source):
    program = parse_source(source)
    assert program.result is not None
    return program.result


def test_lexer_reads_intervals_and_comments():
    tokens = tokenize("Number[0..3r] // trailing comment\n")
    kinds = [token.kind for token in tokens]
    assert kinds == [
        TokenKind.IDENT,
        TokenKind.LBRACKET,
        TokenKind.INTERVAL,
        TokenKind.IDENT,
        TokenKind.RBRACKET,
        TokenKind.EOF,
    ]
    assert tokens[2].value == (0.0, 3.0)


def test_lexer_reports_position_of_illegal_character():
    with pytest.raises(LexError, match="illegal character") as info:
        tokenize("x +\n  $")
    assert info.value.span.line == 2
    assert info.value.span.column == 3


def test_effect_syntax():
    expected = SensEnv.of({R: GradualSens.exact(2), S: GradualSens.unknown()})
    assert parse_effect("2r + ?s") == expected
    assert parse_effect("r + r") == SensEnv.single(R, GradualSens.exact(2))
    assert parse_effect("[1,inf]r") == SensEnv.single(R, GradualSens(1, INF))
    assert parse_effect("1..3r") == SensEnv.single(R, GradualSens(1, 3))
    assert parse_effect("") == SensEnv()


def test_arrow_types_associate_right_and_effects_bind_to_atoms():
    stype = parse_type("Number[r] -> Number -> Number[2r]")
    assert isinstance(stype, SensType) and isinstance(stype.ty, ArrowType)
    assert isinstance(stype.ty.cod, SensType) and isinstance(stype.ty.cod.ty, ArrowType)
    assert effect_of(stype.ty.dom) == SensEnv.single(R)

    wrapped = parse_type("(Number[r] -> Number)[s]")
    assert effect_of(wrapped) == SensEnv.single(S)


def test_list_type():
    stype = parse_type("List<Number[?r]>")
    assert isinstance(stype, SensType) and isinstance(stype.ty, ListType)


def test_operator_precedence():
    expr = result_of("1 + 2 * x :: Number")
    assert isinstance(expr, ast.Ascribe)
    sum_expr = expr.expr
    assert isinstance(sum_expr, ast.PrimApp) and sum_expr.op is PrimOp.ADD
    assert isinstance(sum_expr.args[1], ast.PrimApp) and sum_expr.args[1].op is PrimOp.MUL


def test_comparisons_do_not_chain():
    with pytest.raises(ParseError, match="do not associate"):
        parse_source("1 < 2 < 3")


def test_negative_literals_fold():
    expr = result_of("-3")
    assert isinstance(expr, ast.NumLit) and expr.value == -3.0
    assert isinstance(result_of("-x"), ast.PrimApp)


def test_curried_lambda():
    expr = result_of("fn (a: Number, b: Number[r]) => a + b")
    assert isinstance(expr, ast.Lambda) and isinstance(expr.body, ast.Lambda)
    assert expr.body.param == "b"


def test_method_and_function_list_forms():
    method = result_of("l.get(0)")
    function = result_of("get(l, 0)")
    assert isinstance(method, ast.Get) and isinstance(function, ast.Get)
    assert isinstance(result_of("l.length()"), ast.Length)
    assert isinstance(result_of("l.indexOf(p)"), ast.IndexOf)


def test_annotated_list_literal():
    expr = result_of("List<Number[r]>()")
    assert isinstance(expr, ast.ListLit)
    assert expr.elems == ()
    assert expr.elem_type == parse_type("Number[r]")


def test_def_requires_semicolon():
    with pytest.raises(ParseError, match="expected one of: ;"):
        parse_source("def f(x: Number) = x f(1)")


def test_let_res_rejects_annotation():
    with pytest.raises(ParseError, match="takes its type"):
        parse_source("let res x : Number = 1; x")


def test_laplace_scale_must_be_positive_literal():
    with pytest.raises(ParseError, match="positive literal"):
        parse_source("laplace(1, 0, 1)")


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse_source("if true then 1")
    assert "else" in info.value.expected


def test_program_without_result():
    program = parse_source("let x = 1;")
    assert program.result is None
    assert isinstance(desugar(program), ast.Let)


@pytest.mark.parametrize(
    "path",
    [
        "corpus/scale_two.gsoul",
        "corpus/glm.gsoul",
        "corpus/gat.gsoul",
        "corpus/delayed_refutation.gsoul",
    ],
)
def test_printing_is_stable_after_one_round_trip(repo_root, path):
    source = (repo_root / path).read_text(encoding="utf-8")
    printed = pretty_program(parse_source(source))
    assert pretty_program(parse_source(printed)) == printed


def test_printer_parenthesises_compound_operands():
    printed = pretty_program(parse_source("(1 + 2) * 3"))
    assert printed == "(1 + 2) * 3"


def test_scope_audit_reports_free_names():
    expr = desugar(parse_source("let res r = 1; fn (a: Number[s]) => a + y + r"))
    audit = audit_scopes(expr)
    assert audit.free_variables == frozenset({"y"})
    assert audit.free_resources == frozenset({S})
