"""Resource substitution through values, environments and core terms.

``[Σ/r]`` reaches every evidence and every annotation a value carries,
including the parameter types, bodies and captured environments of closures,
so pending ascriptions inside a closure see the instantiated resource.
"""
from __future__ import annotations

from dataclasses import fields, replace
from typing import Any, Optional, get_args

from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import FreshNames, ResourceVar, SensEnv
from gradual_sensitivity.models.types import RecVar, SensType, subst_resource
from gradual_sensitivity.models.values import (
    Binding,
    ClosureV,
    ConstV,
    Env,
    FoldV,
    InlV,
    InrV,
    ListV,
    PairV,
    Payload,
    ResAbsV,
    Thunk,
    Value,
)

_TERM_NODES = get_args(terms.Term)


class ResourceSubstitution:
    """One ``[replacement/resource]`` pass; environments are rewritten once each."""

    def __init__(
        self, resource: ResourceVar, replacement: SensEnv, names: Optional[FreshNames] = None
    ) -> None:
        self.resource = resource
        self.replacement = replacement
        self.names = names if names is not None else FreshNames()
        self._envs: dict[int, Env] = {}

    # -- values -----------------------------------------------------------

    def value(self, value: Value) -> Value:
        return Value(
            value.evidence.subst(self.resource, self.replacement),
            self.payload(value.payload),
            subst_resource(value.stype, self.resource, self.replacement),
        )

    def payload(self, payload: Payload) -> Payload:
        if isinstance(payload, ConstV):
            return payload
        if isinstance(payload, ClosureV):
            return ClosureV(
                payload.param,
                subst_resource(payload.param_type, self.resource, self.replacement),
                self.term(payload.body),
                self.env(payload.env),
            )
        if isinstance(payload, ResAbsV):
            if payload.resource == self.resource:
                return payload
            binder, body = payload.resource, payload.body
            if binder in self.replacement.resources():
                renamed = self._rename(binder)
                body = self._renaming(binder, renamed).value(body)
                binder = renamed
            return ResAbsV(binder, self.value(body))
        if isinstance(payload, PairV):
            return PairV(self.value(payload.left), self.value(payload.right))
        if isinstance(payload, InlV):
            return InlV(self.value(payload.value))
        if isinstance(payload, InrV):
            return InrV(self.value(payload.value))
        if isinstance(payload, FoldV):
            return FoldV(self.value(payload.value))
        return ListV(tuple(self.value(item) for item in payload.items))

    def binding(self, binding: Binding) -> Binding:
        if isinstance(binding, Thunk):
            return Thunk(self.term(binding.term), self.env(binding.env))
        return self.value(binding)

    def env(self, env: Env) -> Env:
        if env.is_empty:
            return env
        cached = self._envs.get(id(env))
        if cached is not None:
            return cached
        entries = list(env)
        rebuilt = Env.empty()
        for name, binding in reversed(entries):
            rebuilt = rebuilt.extend(name, self.binding(binding))
        self._envs[id(env)] = rebuilt
        return rebuilt

    # -- terms ------------------------------------------------------------

    def term(self, term: terms.Term) -> terms.Term:
        if isinstance(term, terms.ResLam):
            if term.resource == self.resource:
                return term
            if term.resource in self.replacement.resources():
                renamed = self._rename(term.resource)
                body = self._renaming(term.resource, renamed).term(term.body)
                return terms.ResLam(renamed, self.term(body), term.span)
        if isinstance(term, terms.Val):
            return terms.Val(self.value(term.value), term.span)
        changes = {
            f.name: self._field(getattr(term, f.name)) for f in fields(term) if f.name != "span"
        }
        return replace(term, **changes)

    def _rename(self, binder: ResourceVar) -> ResourceVar:
        return self.names.resource(binder.name, self.replacement.resources() | {self.resource})

    def _renaming(self, old: ResourceVar, new: ResourceVar) -> "ResourceSubstitution":
        return ResourceSubstitution(old, SensEnv.single(new), self.names)

    def _field(self, value: Any) -> Any:
        if isinstance(value, _TERM_NODES):
            return self.term(value)
        if isinstance(value, (SensType, RecVar)):
            return subst_resource(value, self.resource, self.replacement)
        if isinstance(value, Evidence):
            return value.subst(self.resource, self.replacement)
        if isinstance(value, SensEnv):
            return value.subst(self.resource, self.replacement)
        if isinstance(value, tuple):
            return tuple(self._field(item) for item in value)
        return value


def value_subst_resource(
    value: Value,
    resource: ResourceVar,
    replacement: SensEnv,
    names: Optional[FreshNames] = None,
) -> Value:
    """``[replacement/resource]value``; ``names`` should be shared across one run."""
    return ResourceSubstitution(resource, replacement, names).value(value)


def term_subst_resource(
    term: terms.Term,
    resource: ResourceVar,
    replacement: SensEnv,
    names: Optional[FreshNames] = None,
) -> terms.Term:
    return ResourceSubstitution(resource, replacement, names).term(term)


def term_subst_var(term: terms.Term, name: str, replacement: terms.Term) -> terms.Term:
    """Replace free occurrences of ``name``; ``replacement`` must be closed."""
    if isinstance(term, terms.Var):
        return replacement if term.name == name else term
    if isinstance(term, terms.Val):
        return term
    if isinstance(term, terms.Lam) and term.param == name:
        return term
    if isinstance(term, terms.FixT) and term.name == name:
        return term
    if isinstance(term, terms.CaseT):
        return replace(
            term,
            scrutinee=term_subst_var(term.scrutinee, name, replacement),
            left_body=_under(term.left_var, term.left_body, name, replacement),
            right_body=_under(term.right_var, term.right_body, name, replacement),
        )
    changes: dict[str, Any] = {}
    for f in fields(term):
        current = getattr(term, f.name)
        if isinstance(current, _TERM_NODES):
            changes[f.name] = term_subst_var(current, name, replacement)
        elif isinstance(current, tuple) and current and isinstance(current[0], _TERM_NODES):
            changes[f.name] = tuple(term_subst_var(item, name, replacement) for item in current)
    return replace(term, **changes) if changes else term


def _under(
    binder: str, body: terms.Term, name: str, replacement: terms.Term
) -> terms.Term:
    return body if binder == name else term_subst_var(body, name, replacement)
