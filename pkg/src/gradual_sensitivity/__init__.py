"""Gradual sensitivity typing public API."""
from .checker.elaborator import compile_source
from .machine.cek import evaluate
from .syntax.parser import parse_source

__version__ = "0.1.0"

__all__ = [
    "compile_source",
    "evaluate",
    "parse_source",
]
