"""Shared enumerations used across the language implementation."""
from __future__ import annotations

from enum import Enum


class BaseKind(str, Enum):
    REAL = "Number"
    BOOL = "Boolean"
    UNIT = "Unit"


class PrimOp(str, Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="
    NEQ = "!="
    AND = "&&"
    OR = "||"
    NOT = "!"
    NEG = "neg"

    @property
    def arity(self) -> int:
        return 1 if self in (PrimOp.NOT, PrimOp.NEG) else 2


class Projection(str, Enum):
    """Meta-functions that take a type (or evidence) apart."""

    DOM = "dom"
    COD = "cod"
    FIRST = "first"
    SECOND = "second"
    LEFT = "left"
    RIGHT = "right"
    UNF = "unf"
    EFF = "eff"
    INST = "inst"
    ELEM = "elem"


class Polarity(str, Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flip(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


class RuntimeErrorKind(str, Enum):
    SENSITIVITY_VIOLATION = "SensitivityViolation"
    DIVISION_BY_ZERO = "DivisionByZero"
    USER_ERROR = "UserError"

    @property
    def catchable(self) -> bool:
        return self is not RuntimeErrorKind.DIVISION_BY_ZERO


class OutcomeKind(str, Enum):
    VALUE = "value"
    ERROR = "error"
    BUDGET_EXHAUSTED = "budget-exhausted"


class GuaranteeKind(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class SensOp(str, Enum):
    """Operators of the sensitivity algebra."""

    ADD = "add"
    MUL = "mul"
    JOIN = "join"
    MEET = "meet"
    SCALE = "scale"


class EnvPredicate(str, Enum):
    BOUNDED = "bounded"
    STATIC = "static"
    PRECISION = "precision"
    CLEQ = "cleq"
