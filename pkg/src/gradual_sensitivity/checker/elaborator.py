"""Type-directed elaboration of surface expressions into evidence-ascribed core terms.

Every introduction form is ascribed with its self-interior evidence, every
application argument is ascribed to the callee's domain, and user ascriptions
are justified by the interior of the judgment they assert. Calls to
resource-polymorphic functions are instantiated from the arguments: the
effect of the argument bound to a ``res`` parameter becomes the instantiation.

Example:

    from gradual_sensitivity.checker.elaborator import compile_source

    compiled = compile_source("def double(res n: Number): Number[2n] = n + n; double(3)")
    str(compiled.stype)  # 'Number'
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from gradual_sensitivity.calculus import projections
from gradual_sensitivity.calculus.evidence_ops import interior
from gradual_sensitivity.calculus.primitives import iop_type
from gradual_sensitivity.checker.well_formed import require_well_formed
from gradual_sensitivity.enums import BaseKind
from gradual_sensitivity.errors import SensitivityTypeError
from gradual_sensitivity.models import terms
from gradual_sensitivity.models.evidence import Evidence
from gradual_sensitivity.models.sensitivity import (
    EMPTY_ENV,
    INFINITE,
    ONE,
    ResourceVar,
    SensEnv,
)
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
    free_resources,
    is_base,
    join_effect,
    map_effects,
    real,
    unit,
)
from gradual_sensitivity.syntax import ast
from gradual_sensitivity.syntax.desugar import desugar, desugar_expr
from gradual_sensitivity.syntax.parser import parse_source
from gradual_sensitivity.syntax.tokens import Span

logger = logging.getLogger(__name__)

Elaborated = tuple[terms.Term, SType]


@dataclass(frozen=True)
class TypeEnv:
    """``Γ; Ξ``: typed variables (innermost first) and in-scope resources."""

    variables: tuple[tuple[str, SType], ...] = ()
    resources: frozenset[ResourceVar] = frozenset()

    @classmethod
    def of(
        cls,
        variables: Mapping[str, SType],
        resources: Optional[frozenset[ResourceVar]] = None,
    ) -> "TypeEnv":
        """Build an environment; resources default to those the types mention."""
        if resources is None:
            resources = frozenset().union(*(free_resources(t) for t in variables.values()))
        env = cls(resources=resources)
        for name, stype in variables.items():
            env = env.bind(name, stype)
        return env

    def bind(self, name: str, stype: SType) -> "TypeEnv":
        return replace(self, variables=((name, stype),) + self.variables)

    def bind_resource(self, resource: ResourceVar) -> "TypeEnv":
        return replace(self, resources=self.resources | {resource})

    def lookup(self, name: str) -> Optional[SType]:
        for bound, stype in self.variables:
            if bound == name:
                return stype
        return None


def _self_ascribed(term: terms.Term, stype: SType, span: Span) -> terms.Ascr:
    return terms.Ascr(Evidence(stype, stype), term, stype, span)


def _erase(stype: SType) -> SType:
    return map_effects(stype, lambda _: EMPTY_ENV)


def _refuted(found: SType, expected: SType, span: Span, context: str) -> SensitivityTypeError:
    if interior(_erase(found), _erase(expected)) is None:
        return SensitivityTypeError(
            f"type constructor mismatch in {context}",
            span=span,
            code="E003",
            expected=str(expected),
            found=str(found),
        )
    return SensitivityTypeError(
        f"sensitivity plausibility refuted in {context}",
        span=span,
        code="E002",
        expected=str(expected),
        found=str(found),
    )


def _mismatch(message: str, span: Span, found: Optional[SType] = None) -> SensitivityTypeError:
    return SensitivityTypeError(
        message, span=span, code="E003", found=str(found) if found is not None else None
    )


def _distribute(expr: ast.Expr, stype: SType) -> ast.Expr:
    """Push an ascription into the branches of conditional forms."""
    span = expr.span
    if isinstance(expr, ast.If):
        return ast.If(
            expr.cond,
            ast.Ascribe(expr.then, stype, span),
            ast.Ascribe(expr.otherwise, stype, span),
            span,
        )
    if isinstance(expr, ast.Case):
        return ast.Case(
            expr.scrutinee,
            expr.left_var,
            ast.Ascribe(expr.left_body, stype, span),
            expr.right_var,
            ast.Ascribe(expr.right_body, stype, span),
            span,
        )
    if isinstance(expr, ast.TryCatch):
        return ast.TryCatch(
            ast.Ascribe(expr.body, stype, span), ast.Ascribe(expr.handler, stype, span), span
        )
    if isinstance(expr, ast.Let):
        return ast.Let(
            expr.name, expr.annotation, expr.value, ast.Ascribe(expr.body, stype, span), span
        )
    if isinstance(expr, ast.LetRes):
        return ast.LetRes(expr.name, expr.value, ast.Ascribe(expr.body, stype, span), span)
    return expr


def _parameter_effects(stype: SType) -> list[SensEnv]:
    """Top-level effects of the curried parameters under any leading binders."""
    found: list[SensEnv] = []
    current: Optional[SType] = stype
    while isinstance(current, SensType):
        ty = current.ty
        if isinstance(ty, ForallType):
            current = ty.body
        elif isinstance(ty, ArrowType):
            dom_effect = effect_of(ty.dom)
            found.append(dom_effect if dom_effect is not None else EMPTY_ENV)
            current = ty.cod
        else:
            break
    return found


@dataclass
class Elaborator:
    """Elaborates desugared surface expressions under a :class:`TypeEnv`."""

    instantiations: list[tuple[ResourceVar, SensEnv]] = field(default_factory=list)

    def elaborate(self, expr: ast.Expr, env: TypeEnv) -> Elaborated:
        span = expr.span
        if isinstance(expr, ast.NumLit):
            return _self_ascribed(terms.Const(float(expr.value), span), real(), span), real()
        if isinstance(expr, ast.BoolLit):
            return _self_ascribed(terms.Const(expr.value, span), boolean(), span), boolean()
        if isinstance(expr, ast.UnitLit):
            return _self_ascribed(terms.Const(None, span), unit(), span), unit()
        if isinstance(expr, ast.Var):
            stype = env.lookup(expr.name)
            if stype is None:
                raise SensitivityTypeError(
                    f"unbound variable '{expr.name}'", span=span, code="E001"
                )
            return terms.Var(expr.name, span), stype
        if isinstance(expr, ast.PrimApp):
            parts = [self.elaborate(arg, env) for arg in expr.args]
            stype = iop_type(expr.op, [s for _, s in parts])
            if stype is None:
                raise SensitivityTypeError(
                    f"operator '{expr.op.value}' is not defined on "
                    f"{', '.join(str(s) for _, s in parts)}",
                    span=span,
                    code="E003",
                )
            return terms.Op(expr.op, tuple(t for t, _ in parts), span), stype
        if isinstance(expr, ast.Lambda):
            require_well_formed(env.resources, expr.param_type, span)
            body, body_type = self.elaborate(expr.body, env.bind(expr.param, expr.param_type))
            stype = arrow(expr.param_type, body_type)
            lam = terms.Lam(expr.param, expr.param_type, body, span)
            return _self_ascribed(lam, stype, span), stype
        if isinstance(expr, ast.ResLambda):
            resource = ResourceVar(expr.resource)
            if resource in env.resources:
                raise SensitivityTypeError(
                    f"resource '{resource}' is already in scope",
                    span=span,
                    code="E005",
                    suggestion="rename the inner resource binder",
                )
            body, body_type = self.elaborate(expr.body, env.bind_resource(resource))
            stype = SensType(ForallType(resource, body_type))
            return _self_ascribed(terms.ResLam(resource, body, span), stype, span), stype
        if isinstance(expr, ast.Call):
            return self._call(expr, env)
        if isinstance(expr, ast.ResApp):
            fn, fn_type = self.elaborate(expr.fn, env)
            unbound = expr.effect.resources() - env.resources
            if unbound:
                raise SensitivityTypeError(
                    f"instantiation mentions resource(s) not in scope: "
                    f"{', '.join(sorted(r.name for r in unbound))}",
                    span=span,
                    code="E005",
                )
            stype = projections.inst(fn_type, expr.effect)
            if stype is None:
                raise _mismatch("only resource abstractions can be instantiated", span, fn_type)
            return terms.ResApp(fn, expr.effect, span), stype
        if isinstance(expr, ast.Ascribe):
            require_well_formed(env.resources, expr.stype, span)
            return self.check(expr.expr, expr.stype, env), expr.stype
        if isinstance(expr, ast.Pair):
            left, left_type = self.elaborate(expr.left, env)
            right, right_type = self.elaborate(expr.right, env)
            stype = SensType(ProdType(left_type, right_type))
            return _self_ascribed(terms.PairT(left, right, span), stype, span), stype
        if isinstance(expr, (ast.Fst, ast.Snd)):
            inner, inner_type = self.elaborate(expr.expr, env)
            if isinstance(expr, ast.Fst):
                stype = projections.first(inner_type)
                node: terms.Term = terms.FstT(inner, span)
            else:
                stype = projections.second(inner_type)
                node = terms.SndT(inner, span)
            if stype is None:
                raise _mismatch("projection from a non-pair", span, inner_type)
            return node, stype
        if isinstance(expr, (ast.Inl, ast.Inr)):
            require_well_formed(env.resources, expr.other, span)
            inner, inner_type = self.elaborate(expr.expr, env)
            if isinstance(expr, ast.Inl):
                stype = SensType(SumType(inner_type, expr.other))
                node = terms.InlT(inner, expr.other, span)
            else:
                stype = SensType(SumType(expr.other, inner_type))
                node = terms.InrT(inner, expr.other, span)
            return _self_ascribed(node, stype, span), stype
        if isinstance(expr, ast.Case):
            return self._case(expr, env)
        if isinstance(expr, ast.Fold):
            require_well_formed(env.resources, expr.stype, span)
            unfolded = projections.unf(expr.stype)
            if unfolded is None:
                raise _mismatch("fold needs a recursive type", span, expr.stype)
            body = self.check(expr.expr, unfolded, env)
            return _self_ascribed(terms.FoldT(expr.stype, body, span), expr.stype, span), expr.stype
        if isinstance(expr, ast.Unfold):
            inner, inner_type = self.elaborate(expr.expr, env)
            stype = projections.unf(inner_type)
            if stype is None:
                raise _mismatch("unfold of a non-recursive value", span, inner_type)
            return terms.UnfoldT(inner, span), stype
        if isinstance(expr, ast.Fix):
            return self._fix(expr, env)
        if isinstance(expr, ast.If):
            return self._if(expr, env)
        if isinstance(expr, ast.TryCatch):
            return self._try(expr, env)
        if isinstance(expr, ast.Let):
            return self._let(expr, env)
        if isinstance(expr, ast.LetRes):
            return self._let_res(expr, env)
        if isinstance(expr, ast.ListLit):
            return self._list(expr, env)
        if isinstance(expr, ast.Length):
            lst, list_type = self._list_operand(expr.lst, env)
            stype = real(list_type.eff.scale(INFINITE))
            return terms.LengthT(lst, stype, span), stype
        if isinstance(expr, ast.Get):
            lst, list_type = self._list_operand(expr.lst, env)
            index, index_type = self._number(expr.index, env, "list index")
            element = projections.elem(list_type)
            stype = None if element is None else add_effect(element, index_type.eff.scale(INFINITE))
            if stype is None:
                raise _mismatch("cannot index this list", span, list_type)
            return terms.GetT(lst, index, stype, span), stype
        if isinstance(expr, ast.IndexOf):
            return self._index_of(expr, env)
        if isinstance(expr, ast.Laplace):
            value, _ = self._number(expr.value, env, "laplace value")
            eps, _ = self._number(expr.eps, env, "laplace eps")
            if not 0 < expr.scale < float("inf"):
                raise SensitivityTypeError(
                    f"laplace scale must be a positive literal, got {expr.scale}",
                    span=span,
                    code="E006",
                )
            return terms.LaplaceT(value, expr.scale, eps, span), real()
        if isinstance(expr, ast.Block):
            return self.elaborate(desugar_expr(expr), env)
        raise SensitivityTypeError(
            f"unsupported form {type(expr).__name__}", span=span, code="E006"
        )

    def check(self, expr: ast.Expr, expected: SType, env: TypeEnv) -> terms.Term:
        """Elaborate ``expr :: expected``, distributing over conditional forms."""
        term, found = self.elaborate(_distribute(expr, expected), env)
        return self.ascribe(term, found, expected, expr.span, "ascription")

    @staticmethod
    def ascribe(
        term: terms.Term, found: SType, expected: SType, span: Span, context: str
    ) -> terms.Ascr:
        evidence = interior(found, expected)
        if evidence is None:
            raise _refuted(found, expected, span, context)
        return terms.Ascr(evidence, term, expected, span)

    # -- forms with more than a few lines -----------------------------------

    def _call(self, expr: ast.Call, env: TypeEnv) -> Elaborated:
        span = expr.span
        fn, stype = self.elaborate(expr.fn, env)
        if expr.args:
            args = [self.elaborate(arg, env) for arg in expr.args]
        else:
            args = [(_self_ascribed(terms.Const(None, span), unit(), span), unit())]
        term: terms.Term = fn
        for index, (arg, arg_type) in enumerate(args):
            while isinstance(stype, SensType) and isinstance(stype.ty, ForallType):
                resource = stype.ty.resource
                effects = _parameter_effects(stype)
                position = next(
                    (k for k, eff in enumerate(effects) if eff.get(resource) == ONE), None
                )
                if position is None or index + position >= len(args):
                    raise SensitivityTypeError(
                        f"cannot infer resource '{resource}' from the arguments",
                        span=span,
                        code="E006",
                        suggestion="instantiate explicitly with f[Σ](...)",
                    )
                source_type = args[index + position][1]
                replacement = effect_of(source_type) or EMPTY_ENV
                logger.debug(
                    "Instantiating resource '%s' with '%s' from argument %d",
                    resource, replacement, index + position,
                )
                self.instantiations.append((resource, replacement))
                instantiated = projections.inst(stype, replacement)
                if instantiated is None:
                    raise _mismatch("cannot instantiate", span, stype)
                term = terms.ResApp(term, replacement, span)
                stype = instantiated
            domain, result = projections.dom(stype), projections.cod(stype)
            if domain is None or result is None:
                raise _mismatch("called value is not a function", span, stype)
            term = terms.App(term, self.ascribe(arg, arg_type, domain, span, "argument"), span)
            stype = result
        return term, stype

    def _case(self, expr: ast.Case, env: TypeEnv) -> Elaborated:
        span = expr.span
        scrutinee, scrutinee_type = self.elaborate(expr.scrutinee, env)
        left_type, right_type = projections.left(scrutinee_type), projections.right(scrutinee_type)
        if left_type is None or right_type is None:
            raise _mismatch("case on a non-sum value", span, scrutinee_type)
        left, left_result = self.elaborate(expr.left_body, env.bind(expr.left_var, left_type))
        right, right_result = self.elaborate(expr.right_body, env.bind(expr.right_var, right_type))
        joined = projections.stype_join(left_result, right_result)
        if joined is None:
            raise _mismatch(f"case branches disagree: {left_result} and {right_result}", span)
        stype = None
        if isinstance(scrutinee_type, SensType):
            stype = join_effect(joined, scrutinee_type.eff)
        if stype is None:
            raise _mismatch("case result has no top-level effect", span, joined)
        node = terms.CaseT(
            scrutinee, expr.left_var, left, expr.right_var, right,
            left_result, right_result, joined, span,
        )
        return node, stype

    def _if(self, expr: ast.If, env: TypeEnv) -> Elaborated:
        span = expr.span
        cond, cond_type = self.elaborate(expr.cond, env)
        if not is_base(cond_type, BaseKind.BOOL):
            raise SensitivityTypeError(
                "condition must be a Boolean",
                span=expr.cond.span,
                code="E003",
                expected=BaseKind.BOOL.value,
                found=str(cond_type),
            )
        assert isinstance(cond_type, SensType)
        then, then_type = self.elaborate(expr.then, env)
        otherwise, else_type = self.elaborate(expr.otherwise, env)
        joined = projections.stype_join(then_type, else_type)
        stype = None if joined is None else join_effect(joined, cond_type.eff)
        if joined is None or stype is None:
            raise _mismatch(f"if branches disagree: {then_type} and {else_type}", span)
        return terms.IfT(cond, then, otherwise, then_type, else_type, joined, span), stype

    def _try(self, expr: ast.TryCatch, env: TypeEnv) -> Elaborated:
        span = expr.span
        body, body_type = self.elaborate(expr.body, env)
        handler, handler_type = self.elaborate(expr.handler, env)
        joined = projections.stype_join(body_type, handler_type)
        if joined is None:
            raise _mismatch(f"try and catch disagree: {body_type} and {handler_type}", span)
        body_evidence = interior(body_type, joined)
        handler_evidence = interior(handler_type, joined)
        if body_evidence is None or handler_evidence is None:
            raise _mismatch("try branches do not fit their join", span, joined)
        return terms.TryT(body, handler, body_evidence, handler_evidence, joined, span), joined

    def _fix(self, expr: ast.Fix, env: TypeEnv) -> Elaborated:
        span = expr.span
        require_well_formed(env.resources, expr.stype, span)
        if not isinstance(expr.body, (ast.Lambda, ast.ResLambda)):
            raise SensitivityTypeError(
                "fix needs a function body", span=span, code="E006",
                suggestion="write 'fix (f: G) => fn (x: A) => ...'",
            )
        body, body_type = self.elaborate(expr.body, env.bind(expr.name, expr.stype))
        ascribed = self.ascribe(body, body_type, expr.stype, span, f"definition of '{expr.name}'")
        node = terms.FixT(expr.name, expr.stype, ascribed, span)
        return _self_ascribed(node, expr.stype, span), expr.stype

    def _let(self, expr: ast.Let, env: TypeEnv) -> Elaborated:
        span = expr.span
        value, value_type = self.elaborate(expr.value, env)
        if expr.annotation is not None:
            require_well_formed(env.resources, expr.annotation, span)
            bound_type = expr.annotation
            argument = self.ascribe(value, value_type, bound_type, span, f"let '{expr.name}'")
        else:
            bound_type = value_type
            argument = _self_ascribed(value, value_type, span)
        body, body_type = self.elaborate(expr.body, env.bind(expr.name, bound_type))
        fn_type = arrow(bound_type, body_type)
        fn = _self_ascribed(terms.Lam(expr.name, bound_type, body, span), fn_type, span)
        return terms.App(fn, argument, span), body_type

    def _let_res(self, expr: ast.LetRes, env: TypeEnv) -> Elaborated:
        span = expr.span
        resource = ResourceVar(expr.name)
        if resource in env.resources:
            raise SensitivityTypeError(
                f"resource '{resource}' is already in scope", span=span, code="E005"
            )
        value, value_type = self.elaborate(expr.value, env)
        if not isinstance(value_type, SensType):
            raise _mismatch("'let res' needs a value of a concrete type", span, value_type)
        bound_type = SensType(value_type.ty, SensEnv.single(resource))
        argument = self.ascribe(value, value_type, bound_type, span, f"let res '{expr.name}'")
        inner = env.bind_resource(resource).bind(expr.name, bound_type)
        body, body_type = self.elaborate(expr.body, inner)
        fn_type = arrow(bound_type, body_type)
        fn = _self_ascribed(terms.Lam(expr.name, bound_type, body, span), fn_type, span)
        return terms.App(fn, argument, span), body_type

    def _list(self, expr: ast.ListLit, env: TypeEnv) -> Elaborated:
        span = expr.span
        if expr.elem_type is not None:
            require_well_formed(env.resources, expr.elem_type, span)
            element_type = expr.elem_type
            elems = tuple(self.check(e, element_type, env) for e in expr.elems)
        else:
            if not expr.elems:
                raise SensitivityTypeError(
                    "an empty list needs an element type",
                    span=span,
                    code="E006",
                    suggestion="write List<G>()",
                )
            parts = [self.elaborate(e, env) for e in expr.elems]
            joined: Optional[SType] = parts[0][1]
            for _, part_type in parts[1:]:
                joined = None if joined is None else projections.stype_join(joined, part_type)
            if joined is None:
                raise _mismatch("list elements have incompatible types", span)
            element_type = joined
            elems = tuple(
                self.ascribe(t, s, element_type, e.span, "list element")
                for (t, s), e in zip(parts, expr.elems)
            )
        stype = SensType(ListType(element_type))
        return _self_ascribed(terms.ListT(elems, span), stype, span), stype

    def _list_operand(self, expr: ast.Expr, env: TypeEnv) -> tuple[terms.Term, SensType]:
        term, stype = self.elaborate(expr, env)
        if not isinstance(stype, SensType) or not isinstance(stype.ty, ListType):
            raise _mismatch("expected a list", expr.span, stype)
        return term, stype

    def _number(self, expr: ast.Expr, env: TypeEnv, context: str) -> tuple[terms.Term, SensType]:
        term, stype = self.elaborate(expr, env)
        if not is_base(stype, BaseKind.REAL):
            raise SensitivityTypeError(
                f"{context} must be a Number",
                span=expr.span,
                code="E003",
                expected=BaseKind.REAL.value,
                found=str(stype),
            )
        assert isinstance(stype, SensType)
        return term, stype

    def _index_of(self, expr: ast.IndexOf, env: TypeEnv) -> Elaborated:
        span = expr.span
        lst, list_type = self._list_operand(expr.lst, env)
        pred, pred_type = self.elaborate(expr.pred, env)
        if not isinstance(pred_type, SensType) or not isinstance(pred_type.ty, ArrowType):
            raise _mismatch("indexOf needs a predicate function", span, pred_type)
        answer = pred_type.ty.cod
        if not is_base(answer, BaseKind.BOOL):
            raise _mismatch("indexOf predicate must return a Boolean", span, answer)
        element = projections.elem(list_type)
        assert element is not None
        elem_evidence = interior(element, pred_type.ty.dom)
        if elem_evidence is None:
            raise _refuted(element, pred_type.ty.dom, span, "indexOf predicate argument")
        latent = effect_of(answer) or EMPTY_ENV
        stype = real(list_type.eff.add(pred_type.eff).add(latent).scale(INFINITE))
        return terms.IndexOfT(lst, pred, elem_evidence, stype, span), stype


@dataclass(frozen=True)
class Compiled:
    """A desugared program with its elaborated core term and type."""

    expr: ast.Expr
    term: terms.Term
    stype: SType


def elaborate(expr: ast.Expr, env: Optional[TypeEnv] = None) -> Elaborated:
    return Elaborator().elaborate(expr, env or TypeEnv())


def typecheck(expr: ast.Expr, env: Optional[TypeEnv] = None) -> SType:
    return elaborate(expr, env)[1]


def compile_program(program: ast.Program, env: Optional[TypeEnv] = None) -> Compiled:
    expr = desugar(program)
    term, stype = elaborate(expr, env)
    logger.info("Program elaborated at type %s", stype)
    return Compiled(expr, term, stype)


def compile_source(source: str, env: Optional[TypeEnv] = None) -> Compiled:
    return compile_program(parse_source(source), env)
