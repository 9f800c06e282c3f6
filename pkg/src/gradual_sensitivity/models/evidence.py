"""Evidence: the pair of types justifying a consistent-subtyping judgment."""
from __future__ import annotations

from dataclasses import dataclass

from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv, StaticSensEnv
from gradual_sensitivity.models.types import SType, effect_of, subst_resource


@dataclass(frozen=True, slots=True)
class Evidence:
    lhs: SType
    rhs: SType

    def subst(self, resource: ResourceVar, replacement: SensEnv) -> "Evidence":
        return Evidence(
            subst_resource(self.lhs, resource, replacement),
            subst_resource(self.rhs, resource, replacement),
        )

    def effects(self) -> tuple[SensEnv, SensEnv]:
        """``eff²``: the top-level effects of both components."""
        lhs, rhs = effect_of(self.lhs), effect_of(self.rhs)
        if lhs is None or rhs is None:
            raise ValueError(f"evidence {self} has no top-level effect")
        return lhs, rhs

    def monitored(self) -> StaticSensEnv:
        """``ms(ε)``: lower bounds of the right component's effect."""
        return self.effects()[1].lower()

    def __str__(self) -> str:
        return f"⟨{self.lhs}, {self.rhs}⟩"
