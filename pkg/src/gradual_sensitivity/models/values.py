"""Runtime values ``ε u :: G`` and closure environments.

Example:

    from gradual_sensitivity.models.values import ConstV, Env, Value

    env = Env.empty().extend("x", some_value)
    env.lookup("x") is some_value  # True
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import ResourceVar, StaticSensEnv, format_sens
from gradual_sensitivity.models.terms import Constant, Term
from gradual_sensitivity.models.types import SType


@dataclass(frozen=True, slots=True)
class ConstV:
    value: Constant

    def __str__(self) -> str:
        if self.value is None:
            return "unit"
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        if self.value < 0:
            return f"-{format_sens(-self.value)}"
        return format_sens(self.value)


@dataclass(frozen=True, slots=True)
class ClosureV:
    param: str
    param_type: SType
    body: Term
    env: "Env"

    def __str__(self) -> str:
        return f"<fn {self.param}>"


@dataclass(frozen=True, slots=True)
class ResAbsV:
    resource: ResourceVar
    body: "Value"

    def __str__(self) -> str:
        return f"<fn [{self.resource}]>"


@dataclass(frozen=True, slots=True)
class PairV:
    left: "Value"
    right: "Value"

    def __str__(self) -> str:
        return f"({self.left.payload}, {self.right.payload})"


@dataclass(frozen=True, slots=True)
class InlV:
    value: "Value"

    def __str__(self) -> str:
        return f"inl({self.value.payload})"


@dataclass(frozen=True, slots=True)
class InrV:
    value: "Value"

    def __str__(self) -> str:
        return f"inr({self.value.payload})"


@dataclass(frozen=True, slots=True)
class FoldV:
    value: "Value"

    def __str__(self) -> str:
        return f"fold({self.value.payload})"


@dataclass(frozen=True, slots=True)
class ListV:
    items: tuple["Value", ...]

    def __str__(self) -> str:
        return f"List({', '.join(str(item.payload) for item in self.items)})"


Payload = Union[ConstV, ClosureV, ResAbsV, PairV, InlV, InrV, FoldV, ListV]


@dataclass(frozen=True, slots=True)
class Value:
    evidence: Evidence
    payload: Payload
    stype: SType

    @property
    def constant(self) -> Constant:
        if not isinstance(self.payload, ConstV):
            raise TypeError(f"value {self.payload} is not a constant")
        return self.payload.value

    def __str__(self) -> str:
        return f"{self.payload} : {self.stype}"


def mon(value: Value) -> Evidence:
    return value.evidence


def msens(evidence: Evidence) -> StaticSensEnv:
    """Lower bounds of the evidence's right-hand effect."""
    return evidence.monitored()


@dataclass(frozen=True, slots=True)
class Thunk:
    """Deferred ``fix`` unrolling; evaluated each time its variable is read."""

    term: Term
    env: "Env"


Binding = Union[Value, Thunk]


@dataclass(frozen=True, slots=True)
class Env:
    """Persistent linked environment; ``extend`` never mutates."""

    name: Optional[str] = None
    binding: Optional[Binding] = None
    parent: Optional["Env"] = None

    @classmethod
    def empty(cls) -> "Env":
        return _EMPTY

    @property
    def is_empty(self) -> bool:
        return self.parent is None

    def extend(self, name: str, binding: Binding) -> "Env":
        return Env(name, binding, self)

    def lookup(self, name: str) -> Optional[Binding]:
        node: Optional[Env] = self
        while node is not None and node.parent is not None:
            if node.name == name:
                return node.binding
            node = node.parent
        return None

    def __iter__(self) -> Iterator[tuple[str, Binding]]:
        node: Optional[Env] = self
        while node is not None and node.parent is not None:
            assert node.name is not None and node.binding is not None
            yield node.name, node.binding
            node = node.parent


_EMPTY = Env()
