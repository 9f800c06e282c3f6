"""Static checking: elaboration into evidence-ascribed core terms and their validation."""
from gradual_sensitivity.checker.elaborator import (
    Compiled,
    Elaborator,
    TypeEnv,
    compile_program,
    compile_source,
    elaborate,
    typecheck,
)
from gradual_sensitivity.checker.validator import validate
from gradual_sensitivity.checker.well_formed import require_well_formed, well_formed

__all__ = [
    "Compiled",
    "Elaborator",
    "TypeEnv",
    "compile_program",
    "compile_source",
    "elaborate",
    "require_well_formed",
    "typecheck",
    "validate",
    "well_formed",
]
