"""Renaming bound resources and recursive variables to a shared name."""
from __future__ import annotations

from typing import Sequence

from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv, fresh_resource
from gradual_sensitivity.models.types import (
    RecVar,
    SType,
    free_recvars,
    free_resources,
    fresh_recvar,
    subst_recvar,
    subst_resource,
)


def align_resources(
    binders: Sequence[tuple[ResourceVar, SType]],
) -> tuple[ResourceVar, list[SType]]:
    """Rename every ``∀b.body`` to a common binder without capture."""
    target = binders[0][0]
    if any(b != target and target in free_resources(body) for b, body in binders):
        taken = {b for b, _ in binders}.union(*(free_resources(body) for _, body in binders))
        target = fresh_resource(target.name, taken)
    replacement = SensEnv.single(target)
    return target, [
        body if b == target else subst_resource(body, b, replacement) for b, body in binders
    ]


def align_recvars(binders: Sequence[tuple[str, SType]]) -> tuple[str, list[SType]]:
    """Rename every ``μb.body`` to a common binder without capture."""
    target = binders[0][0]
    if any(b != target and target in free_recvars(body) for b, body in binders):
        taken = {b for b, _ in binders}.union(*(free_recvars(body) for _, body in binders))
        target = fresh_recvar(target, taken)
    replacement = RecVar(target)
    return target, [
        body if b == target else subst_recvar(body, b, replacement) for b, body in binders
    ]
