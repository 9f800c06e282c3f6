"""Exception hierarchy for static, harness and configuration failures.

Runtime failures of object programs are not exceptions; they are reported
as :class:`~gradual_sensitivity.models.results.RuntimeFailure` values.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Optional

if TYPE_CHECKING:  # pragma: no cover - hints only
    from gradual_sensitivity.syntax.tokens import Span


class GradualSensitivityError(Exception):
    """Base exception carrying a stable diagnostic code."""

    code = "E000"

    def __init__(
        self,
        message: str,
        *,
        span: Optional["Span"] = None,
        code: Optional[str] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        self.message = message
        self.span = span
        if code is not None:
            self.code = code
        self.suggestion = suggestion
        super().__init__(message)

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class LexError(GradualSensitivityError):
    code = "E100"


class ParseError(GradualSensitivityError):
    code = "E101"

    def __init__(
        self,
        message: str,
        *,
        span: Optional["Span"] = None,
        expected: Iterable[str] = (),
    ) -> None:
        self.expected = frozenset(expected)
        if self.expected:
            message = f"{message} (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(message, span=span)


class SensitivityTypeError(GradualSensitivityError):
    """Static type error raised by the elaborator."""

    code = "E002"

    def __init__(
        self,
        message: str,
        *,
        span: Optional["Span"] = None,
        code: Optional[str] = None,
        expected: Optional[str] = None,
        found: Optional[str] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        self.expected = expected
        self.found = found
        detail = message
        if expected is not None or found is not None:
            detail = f"{message}: expected {expected}, found {found}"
        super().__init__(detail, span=span, code=code, suggestion=suggestion)


class EvidenceInvariantError(GradualSensitivityError):
    """Elaborator output reached a shape the evidence operators cannot handle."""

    code = "E900"


class HarnessError(GradualSensitivityError):
    code = "H001"


class ParameterError(GradualSensitivityError):
    code = "P001"


class SettingsError(GradualSensitivityError):
    code = "C001"
