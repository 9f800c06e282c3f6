"""Well-formedness of sensitivity types under a resource set ``Ξ``."""
from __future__ import annotations

from typing import AbstractSet, Optional

from gradual_sensitivity.errors import SensitivityTypeError
from gradual_sensitivity.models.sensitivity import ResourceVar
from gradual_sensitivity.models.types import SType, free_recvars, free_resources
from gradual_sensitivity.syntax.tokens import Span


def well_formed(resources: AbstractSet[ResourceVar], stype: SType) -> bool:
    return free_resources(stype) <= resources and not free_recvars(stype)


def require_well_formed(
    resources: AbstractSet[ResourceVar], stype: SType, span: Optional[Span] = None
) -> None:
    unbound = sorted(free_resources(stype) - resources)
    if unbound:
        names = ", ".join(r.name for r in unbound)
        raise SensitivityTypeError(
            f"type {stype} mentions resource(s) not in scope: {names}",
            span=span,
            code="E005",
            suggestion="bind the resource with 'fn [r] => ...', a 'res' parameter or 'let res'",
        )
    recvars = sorted(free_recvars(stype))
    if recvars:
        raise SensitivityTypeError(
            f"type {stype} has unbound recursive variable(s): {', '.join(recvars)}",
            span=span,
            code="E004",
        )
