"""Re-typing of elaborated core terms.

``validate`` recomputes the type of every core term from its children and
checks each stored annotation against it. Every ascription's evidence must
be at least as precise as the interior of the judgment it justifies.
"""
from __future__ import annotations

from typing import Optional

from gradual_sensitivity.calculus import projections
from gradual_sensitivity.calculus.evidence_ops import interior
from gradual_sensitivity.calculus.precision import alpha_equal, ev_precision
from gradual_sensitivity.calculus.primitives import iop_type
from gradual_sensitivity.checker.elaborator import TypeEnv
from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.errors import EvidenceInvariantError
from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import INFINITE, SensEnv
from gradual_sensitivity.models.types import (
    ArrowType,
    ForallType,
    ListType,
    ProdType,
    SensType,
    SType,
    SumType,
    add_effect,
    arrow,
    boolean,
    effect_of,
    is_base,
    join_effect,
    real,
    unit,
)


def _fail(term: terms.Term, message: str) -> EvidenceInvariantError:
    return EvidenceInvariantError(f"{terms.node_name(term)}: {message}", span=term.span)


def _expect(stype: Optional[SType], term: terms.Term, what: str) -> SType:
    if stype is None:
        raise _fail(term, f"{what} is undefined")
    return stype


def _same(found: SType, stored: SType, term: terms.Term, what: str) -> None:
    if not alpha_equal(found, stored):
        raise _fail(term, f"{what}: computed {found}, stored {stored}")


def _justified(evidence: Evidence, found: SType, expected: SType, term: terms.Term) -> None:
    bound = interior(found, expected)
    if bound is None:
        raise _fail(term, f"{found} is not plausibly a subtype of {expected}")
    if not ev_precision(evidence, bound):
        raise _fail(term, f"evidence {evidence} is not within the interior {bound}")


def _constant_type(value: terms.Constant) -> SType:
    if value is None:
        return unit()
    if isinstance(value, bool):
        return boolean()
    return real()


def validate(term: terms.Term, env: Optional[TypeEnv] = None) -> SType:
    """The type of ``term``; raises :class:`EvidenceInvariantError` on any inconsistency."""
    return _type_of(term, env or TypeEnv())


def _intro_type(form: terms.Term, stored: SType, env: TypeEnv) -> SType:
    if isinstance(form, terms.Const):
        return _constant_type(form.value)
    if isinstance(form, terms.Lam):
        return arrow(form.param_type, _type_of(form.body, env.bind(form.param, form.param_type)))
    if isinstance(form, terms.ResLam):
        body = _type_of(form.body, env.bind_resource(form.resource))
        return SensType(ForallType(form.resource, body))
    if isinstance(form, terms.PairT):
        return SensType(ProdType(_type_of(form.left, env), _type_of(form.right, env)))
    if isinstance(form, terms.InlT):
        return SensType(SumType(_type_of(form.term, env), form.other))
    if isinstance(form, terms.InrT):
        return SensType(SumType(form.other, _type_of(form.term, env)))
    if isinstance(form, terms.FoldT):
        unfolded = _expect(projections.unf(form.stype), form, "unf of the fold type")
        _same(_type_of(form.term, env), unfolded, form, "fold body")
        return form.stype
    if isinstance(form, terms.ListT):
        if not form.elems:
            if not isinstance(stored, SensType) or not isinstance(stored.ty, ListType):
                raise _fail(form, f"empty list ascribed to {stored}")
            return SensType(stored.ty)
        element_types = [_type_of(e, env) for e in form.elems]
        for other in element_types[1:]:
            _same(other, element_types[0], form, "list element")
        return SensType(ListType(element_types[0]))
    raise _fail(form, "not an introduction form")


def _type_of(term: terms.Term, env: TypeEnv) -> SType:
    if isinstance(term, terms.Val):
        return term.value.stype
    if isinstance(term, terms.Ascr):
        if isinstance(term.term, terms.INTRODUCTION_FORMS):
            found = _intro_type(term.term, term.stype, env)
        else:
            found = _type_of(term.term, env)
        _justified(term.evidence, found, term.stype, term)
        return term.stype
    if isinstance(term, terms.Const):
        return _constant_type(term.value)
    if isinstance(term, terms.Var):
        return _expect(env.lookup(term.name), term, f"variable '{term.name}'")
    if isinstance(term, terms.Op):
        args = [_type_of(arg, env) for arg in term.args]
        return _expect(iop_type(term.op, args), term, f"operator '{term.op.value}'")
    if isinstance(term, terms.App):
        fn_type = _type_of(term.fn, env)
        domain = _expect(projections.dom(fn_type), term, "dom of the callee")
        _same(_type_of(term.arg, env), domain, term, "argument")
        return _expect(projections.cod(fn_type), term, "cod of the callee")
    if isinstance(term, terms.ResApp):
        unbound = term.effect.resources() - env.resources
        if unbound:
            raise _fail(term, f"unbound resources {sorted(r.name for r in unbound)}")
        return _expect(projections.inst(_type_of(term.fn, env), term.effect), term, "inst")
    if isinstance(term, terms.FstT):
        return _expect(projections.first(_type_of(term.term, env)), term, "first")
    if isinstance(term, terms.SndT):
        return _expect(projections.second(_type_of(term.term, env)), term, "second")
    if isinstance(term, terms.UnfoldT):
        return _expect(projections.unf(_type_of(term.term, env)), term, "unf")
    if isinstance(term, terms.CaseT):
        scrutinee = _type_of(term.scrutinee, env)
        left = _expect(projections.left(scrutinee), term, "left")
        right = _expect(projections.right(scrutinee), term, "right")
        left_body = _type_of(term.left_body, env.bind(term.left_var, left))
        right_body = _type_of(term.right_body, env.bind(term.right_var, right))
        _same(left_body, term.left_type, term, "left branch")
        _same(right_body, term.right_type, term, "right branch")
        return _branches(term, term.left_type, term.right_type, term.join_type, scrutinee)
    if isinstance(term, terms.IfT):
        cond = _type_of(term.cond, env)
        if not is_base(cond, BaseKind.BOOL):
            raise _fail(term, f"condition has type {cond}")
        _same(_type_of(term.then, env), term.then_type, term, "then branch")
        _same(_type_of(term.otherwise, env), term.else_type, term, "else branch")
        return _branches(term, term.then_type, term.else_type, term.join_type, cond)
    if isinstance(term, terms.TryT):
        body = _type_of(term.body, env)
        handler = _type_of(term.handler, env)
        joined = _expect(projections.stype_join(body, handler), term, "join of try branches")
        _same(joined, term.stype, term, "try join")
        _justified(term.body_evidence, body, joined, term)
        _justified(term.handler_evidence, handler, joined, term)
        return term.stype
    if isinstance(term, terms.FixT):
        _same(_type_of(term.body, env.bind(term.name, term.stype)), term.stype, term, "fix body")
        return term.stype
    if isinstance(term, terms.LengthT):
        lst = _list_type(term.lst, env, term)
        _same(real(lst.eff.scale(INFINITE)), term.stype, term, "length")
        return term.stype
    if isinstance(term, terms.GetT):
        lst = _list_type(term.lst, env, term)
        index = _type_of(term.index, env)
        if not is_base(index, BaseKind.REAL):
            raise _fail(term, f"index has type {index}")
        element = _expect(projections.elem(lst), term, "elem")
        expected = _expect(add_effect(element, _effect(index, term).scale(INFINITE)), term, "get")
        _same(expected, term.stype, term, "get")
        return term.stype
    if isinstance(term, terms.IndexOfT):
        lst = _list_type(term.lst, env, term)
        pred = _type_of(term.pred, env)
        if not isinstance(pred, SensType) or not isinstance(pred.ty, ArrowType):
            raise _fail(term, f"predicate has type {pred}")
        element = _expect(projections.elem(lst), term, "elem")
        _justified(term.elem_evidence, element, pred.ty.dom, term)
        latent = _effect(pred.ty.cod, term)
        _same(real(lst.eff.add(pred.eff).add(latent).scale(INFINITE)), term.stype, term, "indexOf")
        return term.stype
    if isinstance(term, terms.LaplaceT):
        for part in (term.value, term.eps):
            part_type = _type_of(part, env)
            if not is_base(part_type, BaseKind.REAL):
                raise _fail(term, f"laplace operand has type {part_type}")
        return real()
    raise _fail(term, "bare introduction form")


def _effect(stype: SType, term: terms.Term) -> SensEnv:
    effect = effect_of(stype)
    if effect is None:
        raise _fail(term, f"{stype} has no top-level effect")
    return effect


def _list_type(lst: terms.Term, env: TypeEnv, term: terms.Term) -> SensType:
    stype = _type_of(lst, env)
    if not isinstance(stype, SensType) or not isinstance(stype.ty, ListType):
        raise _fail(term, f"expected a list, found {stype}")
    return stype


def _branches(
    term: terms.Term, first: SType, second: SType, joined: SType, scrutinee: SType
) -> SType:
    _same(_expect(projections.stype_join(first, second), term, "branch join"), joined, term, "join")
    return _expect(join_effect(joined, _effect(scrutinee, term)), term, "join with the scrutinee")
