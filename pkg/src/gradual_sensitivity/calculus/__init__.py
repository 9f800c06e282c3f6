"""Precision, consistent subtyping and evidence operators."""
from .evidence_ops import ctrans, ev_invert, interior
from .precision import ev_precision, st_precision
from .projections import stype_join, stype_project
from .subtyping import consistent_subtyping, plausible_equality, weakly_positive

__all__ = [
    "consistent_subtyping",
    "ctrans",
    "ev_invert",
    "ev_precision",
    "interior",
    "plausible_equality",
    "st_precision",
    "stype_join",
    "stype_project",
    "weakly_positive",
]
