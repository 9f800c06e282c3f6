"""Regex-driven tokenizer for ``.gsoul`` sources.

Example:

    from gradual_sensitivity.syntax.lexer import tokenize

    [t.kind.name for t in tokenize("Number[?r]")][:-1]
    # ['IDENT', 'LBRACKET', 'QUESTION', 'IDENT', 'RBRACKET']
"""
from __future__ import annotations

import math
import re

from gradual_sensitivity.errors import LexError
from gradual_sensitivity.syntax.tokens import KEYWORDS, Span, Token, TokenKind

_NUM = r"\d+(?:\.\d+)?"

_PATTERNS: list[tuple[str, str]] = [
    ("SKIP", r"[ \t\r\n]+|//[^\n]*"),
    ("INTERVAL", rf"(?P<ilo>{_NUM})\.\.(?P<ihi>{_NUM}|inf\b)"),
    ("BADNUM", rf"\d+\.(?![\d.])|{_NUM}\.\d"),
    ("NUMBER", _NUM),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("OP", r"::|->|=>|<=|>=|==|!=|&&|\|\||[\[\](){}<>,;:.+\-*/!|=?]"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _PATTERNS))

_SYMBOLS: dict[str, TokenKind] = {
    "::": TokenKind.DCOLON,
    "->": TokenKind.ARROW,
    "=>": TokenKind.FATARROW,
    "<=": TokenKind.LE,
    ">=": TokenKind.GE,
    "==": TokenKind.EQEQ,
    "!=": TokenKind.NEQ,
    "&&": TokenKind.ANDAND,
    "||": TokenKind.OROR,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "<": TokenKind.LANGLE,
    ">": TokenKind.RANGLE,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMI,
    ":": TokenKind.COLON,
    ".": TokenKind.DOT,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "!": TokenKind.BANG,
    "|": TokenKind.PIPE,
    "=": TokenKind.EQ,
    "?": TokenKind.QUESTION,
}


def _bound(text: str) -> float:
    return math.inf if text == "inf" else float(text)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start = 1, 0
    position = 0
    while position < len(source):
        match = _MASTER.match(source, position)
        column = position - line_start + 1
        if match is None:
            span = Span(position, position + 1, line, column)
            raise LexError(f"illegal character {source[position]!r}", span=span)
        kind = match.lastgroup
        lexeme = match.group()
        span = Span(position, match.end(), line, column)
        if kind == "SKIP":
            newlines = lexeme.count("\n")
            if newlines:
                line += newlines
                line_start = position + lexeme.rindex("\n") + 1
        elif kind == "BADNUM":
            raise LexError(f"malformed number {lexeme!r}", span=span)
        elif kind == "INTERVAL":
            lo, hi = _bound(match.group("ilo")), _bound(match.group("ihi"))
            if lo > hi:
                raise LexError(f"interval {lexeme!r} has lower bound above upper bound", span=span)
            tokens.append(Token(TokenKind.INTERVAL, lexeme, span, (lo, hi)))
        elif kind == "NUMBER":
            tokens.append(Token(TokenKind.NUMBER, lexeme, span, float(lexeme)))
        elif kind == "NAME":
            token_kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(token_kind, lexeme, span))
        else:
            tokens.append(Token(_SYMBOLS[lexeme], lexeme, span))
        position = match.end()
    end = Span(len(source), len(source), line, len(source) - line_start + 1)
    tokens.append(Token(TokenKind.EOF, "", end))
    return tokens
