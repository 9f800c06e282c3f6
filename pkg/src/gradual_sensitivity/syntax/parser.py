"""Recursive-descent parser for ``.gsoul`` programs, types and effects.

Example:

    from gradual_sensitivity.syntax.parser import parse_source, parse_type

    program = parse_source("def double(res n: Number): Number[2n] = n + n; double(3)")
    str(parse_type("Number[0..3r] -> Number[?r]"))  # "Number[[0,3]r] -> Number[?r]"
"""
from __future__ import annotations

from typing import Callable, NoReturn, Optional, TypeVar

from gradual_sensitivity.enums import BaseKind, PrimOp
from gradual_sensitivity.errors import ParseError
from gradual_sensitivity.models.sensitivity import (
    EMPTY_ENV,
    INFINITE,
    ONE,
    GradualSens,
    ResourceVar,
    SensEnv,
)
from gradual_sensitivity.models.types import (
    ArrowType,
    BaseType,
    ForallType,
    ListType,
    ProdType,
    RecType,
    RecVar,
    SensType,
    SType,
    SumType,
    add_effect,
)
from gradual_sensitivity.syntax import ast
from gradual_sensitivity.syntax.lexer import tokenize
from gradual_sensitivity.syntax.tokens import Span, Token, TokenKind

T = TypeVar("T")

_BASE_NAMES = {kind.value: kind for kind in BaseKind}

_COMPARISONS = {
    TokenKind.LANGLE: PrimOp.LT,
    TokenKind.LE: PrimOp.LE,
    TokenKind.RANGLE: PrimOp.GT,
    TokenKind.GE: PrimOp.GE,
    TokenKind.EQEQ: PrimOp.EQ,
    TokenKind.NEQ: PrimOp.NEQ,
}
_ADDITIVE = {TokenKind.PLUS: PrimOp.ADD, TokenKind.MINUS: PrimOp.SUB}
_MULTIPLICATIVE = {TokenKind.STAR: PrimOp.MUL, TokenKind.SLASH: PrimOp.DIV}

_EXPRESSION_START = (
    "number", "identifier", "true", "false", "unit", "(", "{", "fn", "if", "try",
    "case", "inl", "inr", "fold", "unfold", "fix", "fst", "snd", "laplace",
    "indexOf", "length", "get", "-", "!",
)
_TYPE_START = ("Number", "Boolean", "Unit", "List", "(", "forall", "mu", "identifier")


class Parser:
    """One-token-lookahead parser over the output of :func:`tokenize`."""

    def __init__(self, tokens: list[Token]) -> None:
        if not tokens or tokens[-1].kind is not TokenKind.EOF:
            raise ValueError("token stream must end with EOF")
        self._tokens = tokens
        self._pos = 0

    # -- token helpers ---------------------------------------------------

    @property
    def _current(self) -> Token:
        return self._tokens[self._pos]

    def _peek(self, offset: int = 1) -> Token:
        index = min(self._pos + offset, len(self._tokens) - 1)
        return self._tokens[index]

    @property
    def _previous(self) -> Token:
        return self._tokens[max(self._pos - 1, 0)]

    def _advance(self) -> Token:
        token = self._current
        if token.kind is not TokenKind.EOF:
            self._pos += 1
        return token

    def _at(self, kind: TokenKind) -> bool:
        return self._current.kind is kind

    def _at_keyword(self, word: str) -> bool:
        return self._current.is_keyword(word)

    def _accept(self, kind: TokenKind) -> Optional[Token]:
        if self._at(kind):
            return self._advance()
        return None

    def _expect(self, kind: TokenKind) -> Token:
        if not self._at(kind):
            self._fail(kind.value)
        return self._advance()

    def _expect_keyword(self, word: str) -> Token:
        if not self._at_keyword(word):
            self._fail(word)
        return self._advance()

    def _expect_ident(self) -> Token:
        return self._expect(TokenKind.IDENT)

    def _fail(self, *expected: str) -> NoReturn:
        token = self._current
        raise ParseError(f"unexpected {token.describe()}", span=token.span, expected=expected)

    def _span_from(self, start: Span) -> Span:
        return start.to(self._previous.span)

    # -- programs and declarations --------------------------------------

    def parse_program(self) -> ast.Program:
        start = self._current.span
        decls = self._parse_decls()
        result: Optional[ast.Expr] = None
        if not self._at(TokenKind.EOF):
            result = self.parse_expr()
            self._accept(TokenKind.SEMI)
        if not self._at(TokenKind.EOF):
            self._fail("end of input", ";")
        return ast.Program(tuple(decls), result, self._span_from(start))

    def _parse_decls(self) -> list[ast.Decl]:
        decls: list[ast.Decl] = []
        while self._at_keyword("def") or self._at_keyword("let"):
            decls.append(self._parse_def() if self._at_keyword("def") else self._parse_let())
        return decls

    def _parse_def(self) -> ast.DefDecl:
        start = self._expect_keyword("def").span
        name = self._expect_ident().lexeme
        resources: list[str] = []
        if self._accept(TokenKind.LBRACKET):
            resources = self._resource_names()
        self._expect(TokenKind.LPAREN)
        params = self._comma_separated(self._parse_param, TokenKind.RPAREN)
        ret = self.parse_stype() if self._accept(TokenKind.COLON) else None
        self._expect(TokenKind.EQ)
        body = self.parse_expr()
        self._expect(TokenKind.SEMI)
        return ast.DefDecl(name, tuple(resources), tuple(params), ret, body, self._span_from(start))

    def _parse_param(self) -> ast.Param:
        start = self._current.span
        is_res = self._accept_keyword("res")
        name = self._expect_ident().lexeme
        self._expect(TokenKind.COLON)
        stype = self.parse_stype()
        return ast.Param(name, stype, is_res, self._span_from(start))

    def _parse_let(self) -> ast.LetDecl:
        start = self._expect_keyword("let").span
        is_res = self._accept_keyword("res")
        name = self._expect_ident().lexeme
        annotation = self.parse_stype() if self._accept(TokenKind.COLON) else None
        if is_res and annotation is not None:
            raise ParseError(
                "'let res' takes its type from the bound expression", span=self._previous.span
            )
        self._expect(TokenKind.EQ)
        value = self.parse_expr()
        self._expect(TokenKind.SEMI)
        return ast.LetDecl(name, annotation, value, is_res, self._span_from(start))

    def _accept_keyword(self, word: str) -> bool:
        if self._at_keyword(word):
            self._advance()
            return True
        return False

    def _comma_separated(self, item: Callable[[], T], closer: TokenKind) -> list[T]:
        items: list[T] = []
        if self._accept(closer):
            return items
        items.append(item())
        while self._accept(TokenKind.COMMA):
            if self._at(closer):
                break
            items.append(item())
        self._expect(closer)
        return items

    def _resource_names(self) -> list[str]:
        """Identifiers up to the closing ``]``; the opening bracket is already consumed."""
        return self._comma_separated(lambda: self._expect_ident().lexeme, TokenKind.RBRACKET)

    # -- types and effects ----------------------------------------------

    def parse_stype(self) -> SType:
        if self._accept_keyword("forall"):
            resource = self._expect_ident().lexeme
            self._expect(TokenKind.DOT)
            return SensType(ForallType(ResourceVar(resource), self.parse_stype()))
        if self._accept_keyword("mu"):
            var = self._expect_ident().lexeme
            self._expect(TokenKind.DOT)
            return SensType(RecType(var, self.parse_stype()))
        left = self._parse_stype_atom()
        if self._accept(TokenKind.ARROW):
            return SensType(ArrowType(left, self.parse_stype()))
        return left

    def _parse_stype_atom(self) -> SType:
        token = self._current
        stype: SType
        if token.kind is TokenKind.IDENT and token.lexeme in _BASE_NAMES:
            self._advance()
            stype = SensType(BaseType(_BASE_NAMES[token.lexeme]))
        elif token.kind is TokenKind.IDENT and token.lexeme == "List":
            self._advance()
            self._expect(TokenKind.LANGLE)
            elem = self.parse_stype()
            self._expect(TokenKind.RANGLE)
            stype = SensType(ListType(elem))
        elif token.kind is TokenKind.IDENT:
            self._advance()
            if self._at(TokenKind.LBRACKET):
                raise ParseError(
                    f"recursive variable '{token.lexeme}' cannot carry an effect",
                    span=self._current.span,
                )
            return RecVar(token.lexeme)
        elif self._accept(TokenKind.LPAREN):
            first = self.parse_stype()
            if self._accept(TokenKind.COMMA):
                stype = SensType(ProdType(first, self.parse_stype()))
            elif self._accept(TokenKind.PIPE):
                stype = SensType(SumType(first, self.parse_stype()))
            else:
                stype = first
            self._expect(TokenKind.RPAREN)
        else:
            self._fail(*_TYPE_START)
        if self._accept(TokenKind.LBRACKET):
            effect = self._parse_effect_body()
            self._expect(TokenKind.RBRACKET)
            widened = add_effect(stype, effect)
            if widened is None:
                raise ParseError("a recursive variable cannot carry an effect", span=token.span)
            stype = widened
        return stype

    def parse_complete_stype(self) -> SType:
        stype = self.parse_stype()
        if not self._at(TokenKind.EOF):
            self._fail("->", "end of input")
        return stype

    def parse_effect(self) -> SensEnv:
        effect = self._parse_effect_body()
        if not self._at(TokenKind.EOF):
            self._fail("+", "end of input")
        return effect

    def _parse_effect_body(self) -> SensEnv:
        if self._at(TokenKind.RBRACKET) or self._at(TokenKind.EOF):
            return EMPTY_ENV
        effect = self._parse_effect_term()
        while self._accept(TokenKind.PLUS):
            effect = effect.add(self._parse_effect_term())
        return effect

    def _parse_effect_term(self) -> SensEnv:
        coefficient = self._parse_coefficient()
        resource = self._expect_ident().lexeme
        return SensEnv.single(ResourceVar(resource), coefficient)

    def _parse_coefficient(self) -> GradualSens:
        token = self._current
        if token.kind is TokenKind.NUMBER:
            self._advance()
            assert isinstance(token.value, float)
            return GradualSens.exact(token.value)
        if token.kind is TokenKind.INTERVAL:
            self._advance()
            assert isinstance(token.value, tuple)
            return GradualSens(*token.value)
        if self._accept(TokenKind.QUESTION):
            return GradualSens.unknown()
        if self._accept_keyword("inf"):
            return INFINITE
        if self._accept(TokenKind.LBRACKET):
            lo = self._parse_bound()
            self._expect(TokenKind.COMMA)
            hi = self._parse_bound()
            self._expect(TokenKind.RBRACKET)
            if lo > hi:
                raise ParseError("interval lower bound exceeds upper bound", span=token.span)
            return GradualSens(lo, hi)
        return ONE

    def _parse_bound(self) -> float:
        if self._accept_keyword("inf"):
            return INFINITE.hi
        token = self._expect(TokenKind.NUMBER)
        assert isinstance(token.value, float)
        return token.value

    # -- expressions -----------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        start = self._current.span
        expr = self._parse_or()
        while self._accept(TokenKind.DCOLON):
            expr = ast.Ascribe(expr, self.parse_stype(), self._span_from(start))
        return expr

    def _parse_or(self) -> ast.Expr:
        return self._binary_left(self._parse_and, {TokenKind.OROR: PrimOp.OR})

    def _parse_and(self) -> ast.Expr:
        return self._binary_left(self._parse_comparison, {TokenKind.ANDAND: PrimOp.AND})

    def _parse_comparison(self) -> ast.Expr:
        start = self._current.span
        left = self._parse_additive()
        op = _COMPARISONS.get(self._current.kind)
        if op is None:
            return left
        self._advance()
        right = self._parse_additive()
        if self._current.kind in _COMPARISONS:
            raise ParseError(
                "comparison operators do not associate; add parentheses",
                span=self._current.span,
            )
        return ast.PrimApp(op, (left, right), self._span_from(start))

    def _parse_additive(self) -> ast.Expr:
        return self._binary_left(self._parse_multiplicative, _ADDITIVE)

    def _parse_multiplicative(self) -> ast.Expr:
        return self._binary_left(self._parse_unary, _MULTIPLICATIVE)

    def _binary_left(
        self, operand: Callable[[], ast.Expr], operators: dict[TokenKind, PrimOp]
    ) -> ast.Expr:
        start = self._current.span
        expr = operand()
        while self._current.kind in operators:
            op = operators[self._advance().kind]
            expr = ast.PrimApp(op, (expr, operand()), self._span_from(start))
        return expr

    def _parse_unary(self) -> ast.Expr:
        start = self._current.span
        if self._accept(TokenKind.MINUS):
            operand = self._parse_unary()
            if isinstance(operand, ast.NumLit):
                return ast.NumLit(-operand.value, self._span_from(start))
            return ast.PrimApp(PrimOp.NEG, (operand,), self._span_from(start))
        if self._accept(TokenKind.BANG):
            return ast.PrimApp(PrimOp.NOT, (self._parse_unary(),), self._span_from(start))
        return self._parse_postfix()

    def _parse_postfix(self) -> ast.Expr:
        start = self._current.span
        expr = self._parse_primary()
        while True:
            if self._accept(TokenKind.LPAREN):
                args = self._comma_separated(self.parse_expr, TokenKind.RPAREN)
                expr = ast.Call(expr, tuple(args), self._span_from(start))
            elif self._accept(TokenKind.LBRACKET):
                effect = self._parse_effect_body()
                self._expect(TokenKind.RBRACKET)
                expr = ast.ResApp(expr, effect, self._span_from(start))
            elif self._accept(TokenKind.DOT):
                expr = self._parse_method(expr, start)
            else:
                return expr

    def _parse_method(self, receiver: ast.Expr, start: Span) -> ast.Expr:
        if self._accept_keyword("indexOf"):
            self._expect(TokenKind.LPAREN)
            pred = self.parse_expr()
            self._expect(TokenKind.RPAREN)
            return ast.IndexOf(receiver, pred, self._span_from(start))
        if self._accept_keyword("length"):
            self._expect(TokenKind.LPAREN)
            self._expect(TokenKind.RPAREN)
            return ast.Length(receiver, self._span_from(start))
        if self._accept_keyword("get"):
            self._expect(TokenKind.LPAREN)
            index = self.parse_expr()
            self._expect(TokenKind.RPAREN)
            return ast.Get(receiver, index, self._span_from(start))
        self._fail("indexOf", "length", "get")

    def _parse_primary(self) -> ast.Expr:
        token = self._current
        start = token.span
        if token.kind is TokenKind.NUMBER:
            self._advance()
            assert isinstance(token.value, float)
            return ast.NumLit(token.value, start)
        if token.kind is TokenKind.IDENT:
            if token.lexeme == "List" and self._peek().kind in (TokenKind.LANGLE, TokenKind.LPAREN):
                return self._parse_list_literal()
            self._advance()
            return ast.Var(token.lexeme, start)
        if token.kind is TokenKind.LPAREN:
            return self._parse_parenthesised()
        if token.kind is TokenKind.LBRACE:
            return self._parse_block()
        if token.kind is TokenKind.KEYWORD:
            handler = self._KEYWORD_FORMS.get(token.lexeme)
            if handler is not None:
                return handler(self)
        self._fail(*_EXPRESSION_START)

    def _parse_parenthesised(self) -> ast.Expr:
        start = self._expect(TokenKind.LPAREN).span
        if self._accept(TokenKind.RPAREN):
            return ast.UnitLit(self._span_from(start))
        first = self.parse_expr()
        if self._accept(TokenKind.COMMA):
            second = self.parse_expr()
            self._expect(TokenKind.RPAREN)
            return ast.Pair(first, second, self._span_from(start))
        self._expect(TokenKind.RPAREN)
        return first

    def _parse_block(self) -> ast.Expr:
        start = self._expect(TokenKind.LBRACE).span
        decls = self._parse_decls()
        result = self.parse_expr()
        self._accept(TokenKind.SEMI)
        self._expect(TokenKind.RBRACE)
        if not decls:
            return result
        return ast.Block(tuple(decls), result, self._span_from(start))

    def _parse_list_literal(self) -> ast.Expr:
        start = self._expect_ident().span
        elem_type: Optional[SType] = None
        if self._accept(TokenKind.LANGLE):
            elem_type = self.parse_stype()
            self._expect(TokenKind.RANGLE)
        self._expect(TokenKind.LPAREN)
        elems = self._comma_separated(self.parse_expr, TokenKind.RPAREN)
        return ast.ListLit(tuple(elems), elem_type, self._span_from(start))

    def _parse_literal_keyword(self) -> ast.Expr:
        token = self._advance()
        if token.lexeme == "unit":
            return ast.UnitLit(token.span)
        return ast.BoolLit(token.lexeme == "true", token.span)

    def _parse_fn(self) -> ast.Expr:
        start = self._expect_keyword("fn").span
        if self._accept(TokenKind.LBRACKET):
            resources = self._resource_names()
            if not resources:
                raise ParseError("resource abstraction needs at least one resource", span=start)
            self._expect(TokenKind.FATARROW)
            body = self.parse_expr()
            span = self._span_from(start)
            for resource in reversed(resources):
                body = ast.ResLambda(resource, body, span)
            return body
        self._expect(TokenKind.LPAREN)
        params = self._comma_separated(self._parse_lambda_param, TokenKind.RPAREN)
        self._expect(TokenKind.FATARROW)
        body = self.parse_expr()
        span = self._span_from(start)
        if not params:
            return ast.Lambda("_", SensType(BaseType(BaseKind.UNIT)), body, span)
        for name, stype in reversed(params):
            body = ast.Lambda(name, stype, body, span)
        return body

    def _parse_lambda_param(self) -> tuple[str, SType]:
        name = self._expect_ident().lexeme
        self._expect(TokenKind.COLON)
        return name, self.parse_stype()

    def _parse_if(self) -> ast.Expr:
        start = self._expect_keyword("if").span
        cond = self.parse_expr()
        self._expect_keyword("then")
        then = self.parse_expr()
        self._expect_keyword("else")
        otherwise = self.parse_expr()
        return ast.If(cond, then, otherwise, self._span_from(start))

    def _parse_try(self) -> ast.Expr:
        start = self._expect_keyword("try").span
        body = self._parse_block()
        self._expect_keyword("catch")
        handler = self._parse_block()
        return ast.TryCatch(body, handler, self._span_from(start))

    def _parse_case(self) -> ast.Expr:
        start = self._expect_keyword("case").span
        scrutinee = self.parse_expr()
        self._expect_keyword("of")
        self._expect(TokenKind.LBRACE)
        self._expect_keyword("inl")
        left_var = self._expect_ident().lexeme
        self._expect(TokenKind.FATARROW)
        left_body = self.parse_expr()
        self._expect(TokenKind.PIPE)
        self._expect_keyword("inr")
        right_var = self._expect_ident().lexeme
        self._expect(TokenKind.FATARROW)
        right_body = self.parse_expr()
        self._expect(TokenKind.RBRACE)
        return ast.Case(
            scrutinee, left_var, left_body, right_var, right_body, self._span_from(start)
        )

    def _parse_injection(self) -> ast.Expr:
        token = self._advance()
        self._expect(TokenKind.LANGLE)
        other = self.parse_stype()
        self._expect(TokenKind.RANGLE)
        expr = self._parenthesised_args(1)[0]
        span = self._span_from(token.span)
        if token.lexeme == "inl":
            return ast.Inl(expr, other, span)
        return ast.Inr(expr, other, span)

    def _parse_fold(self) -> ast.Expr:
        start = self._expect_keyword("fold").span
        self._expect(TokenKind.LANGLE)
        stype = self.parse_stype()
        self._expect(TokenKind.RANGLE)
        expr = self._parenthesised_args(1)[0]
        return ast.Fold(stype, expr, self._span_from(start))

    def _parse_unary_form(self) -> ast.Expr:
        token = self._advance()
        (expr,) = self._parenthesised_args(1)
        span = self._span_from(token.span)
        if token.lexeme == "unfold":
            return ast.Unfold(expr, span)
        if token.lexeme == "fst":
            return ast.Fst(expr, span)
        if token.lexeme == "snd":
            return ast.Snd(expr, span)
        return ast.Length(expr, span)

    def _parse_binary_form(self) -> ast.Expr:
        token = self._advance()
        first, second = self._parenthesised_args(2)
        span = self._span_from(token.span)
        if token.lexeme == "indexOf":
            return ast.IndexOf(first, second, span)
        return ast.Get(first, second, span)

    def _parenthesised_args(self, count: int) -> list[ast.Expr]:
        open_paren = self._expect(TokenKind.LPAREN)
        args = self._comma_separated(self.parse_expr, TokenKind.RPAREN)
        if len(args) != count:
            raise ParseError(
                f"expected {count} argument(s), found {len(args)}", span=open_paren.span
            )
        return args

    def _parse_fix(self) -> ast.Expr:
        start = self._expect_keyword("fix").span
        self._expect(TokenKind.LPAREN)
        name = self._expect_ident().lexeme
        self._expect(TokenKind.COLON)
        stype = self.parse_stype()
        self._expect(TokenKind.RPAREN)
        self._expect(TokenKind.FATARROW)
        body = self.parse_expr()
        return ast.Fix(name, stype, body, self._span_from(start))

    def _parse_laplace(self) -> ast.Expr:
        start = self._expect_keyword("laplace").span
        self._expect(TokenKind.LPAREN)
        value = self.parse_expr()
        self._expect(TokenKind.COMMA)
        scale_token = self._expect(TokenKind.NUMBER)
        assert isinstance(scale_token.value, float)
        if scale_token.value <= 0:
            raise ParseError("laplace scale must be a positive literal", span=scale_token.span)
        self._expect(TokenKind.COMMA)
        eps = self.parse_expr()
        self._expect(TokenKind.RPAREN)
        return ast.Laplace(value, scale_token.value, eps, self._span_from(start))

    _KEYWORD_FORMS: dict[str, Callable[["Parser"], ast.Expr]] = {
        "true": _parse_literal_keyword,
        "false": _parse_literal_keyword,
        "unit": _parse_literal_keyword,
        "fn": _parse_fn,
        "if": _parse_if,
        "try": _parse_try,
        "case": _parse_case,
        "inl": _parse_injection,
        "inr": _parse_injection,
        "fold": _parse_fold,
        "unfold": _parse_unary_form,
        "fst": _parse_unary_form,
        "snd": _parse_unary_form,
        "length": _parse_unary_form,
        "indexOf": _parse_binary_form,
        "get": _parse_binary_form,
        "fix": _parse_fix,
        "laplace": _parse_laplace,
    }


def parse(tokens: list[Token]) -> ast.Program:
    return Parser(tokens).parse_program()


def parse_source(source: str) -> ast.Program:
    return parse(tokenize(source))


def parse_type(source: str) -> SType:
    return Parser(tokenize(source)).parse_complete_stype()


def parse_effect(source: str) -> SensEnv:
    """Parse a bare effect such as ``2r + ?s`` (used for ``--delta``)."""
    return Parser(tokenize(source)).parse_effect()
