"""Evidence-based evaluation: the CEK machine and its substitution-based oracle."""
from gradual_sensitivity.machine.cek import DEFAULT_STEP_BUDGET, Machine, evaluate
from gradual_sensitivity.machine.noise import LaplaceNoise, NoiseSource, RecordingNoise
from gradual_sensitivity.machine.reference import agree, reference_evaluate

__all__ = [
    "DEFAULT_STEP_BUDGET",
    "LaplaceNoise",
    "Machine",
    "NoiseSource",
    "RecordingNoise",
    "agree",
    "evaluate",
    "reference_evaluate",
]
