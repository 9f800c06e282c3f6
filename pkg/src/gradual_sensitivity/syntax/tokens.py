"""Token kinds and source spans."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Final, Union


@dataclass(frozen=True, slots=True)
class Span:
    start: int
    end: int
    line: int = 1
    column: int = 1

    def to(self, other: "Span") -> "Span":
        return Span(self.start, max(self.end, other.end), self.line, self.column)

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


NO_SPAN: Final = Span(0, 0, 0, 0)


class TokenKind(str, Enum):
    IDENT = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"
    INTERVAL = "interval"
    QUESTION = "?"
    LBRACKET = "["
    RBRACKET = "]"
    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    RBRACE = "}"
    LANGLE = "<"
    RANGLE = ">"
    LE = "<="
    GE = ">="
    EQEQ = "=="
    NEQ = "!="
    COMMA = ","
    SEMI = ";"
    COLON = ":"
    DCOLON = "::"
    DOT = "."
    ARROW = "->"
    FATARROW = "=>"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    SLASH = "/"
    BANG = "!"
    ANDAND = "&&"
    OROR = "||"
    PIPE = "|"
    EQ = "="
    EOF = "end of input"


KEYWORDS: Final = frozenset(
    {
        "def", "let", "res", "fn", "if", "then", "else", "try", "catch",
        "true", "false", "unit", "case", "of", "inl", "inr", "fold", "unfold",
        "fix", "fst", "snd", "forall", "mu", "laplace", "inf",
        "indexOf", "length", "get",
    }
)

TokenValue = Union[None, float, tuple[float, float]]


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span
    value: TokenValue = None

    def is_keyword(self, word: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.lexeme == word

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return self.kind.value
        return f"'{self.lexeme}'"
