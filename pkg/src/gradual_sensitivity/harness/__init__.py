"""Randomised validation of metric preservation, gradual guarantees and evidence laws."""
from gradual_sensitivity.harness.distance import distance
from gradual_sensitivity.harness.evidence_laws import (
    ctrans_assoc_fuzz,
    ctrans_monotonicity_fuzz,
    evidence_laws,
    interior_fuzz,
    interior_optimality_fuzz,
)
from gradual_sensitivity.harness.gradual_guarantee import gg_fuzz, value_precision, widen_program
from gradual_sensitivity.harness.metric_preservation import mp_check, ts_mp_check
from gradual_sensitivity.harness.specs import MPSpec, PreparedSpec, prepare

__all__ = [
    "MPSpec",
    "PreparedSpec",
    "ctrans_assoc_fuzz",
    "ctrans_monotonicity_fuzz",
    "distance",
    "evidence_laws",
    "gg_fuzz",
    "interior_fuzz",
    "interior_optimality_fuzz",
    "mp_check",
    "prepare",
    "ts_mp_check",
    "value_precision",
    "widen_program",
]
