"""Desugaring of declarations and blocks, plus a scope audit.

``def`` becomes resource abstractions over curried lambdas (wrapped in ``fix``
when the body refers to the definition), ``res`` parameters become resource
binders, and declarations become nested :class:`~ast.Let` / :class:`~ast.LetRes`
forms. Calls are left as :class:`~ast.Call` so the elaborator can instantiate
resource binders from the arguments.

Example:

    from gradual_sensitivity.syntax.desugar import desugar
    from gradual_sensitivity.syntax.parser import parse_source

    expr = desugar(parse_source("def double(res n: Number): Number[2n] = n + n; double(1)"))
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, get_args

from gradual_sensitivity.errors import SensitivityTypeError
from gradual_sensitivity.models.sensitivity import ResourceVar, SensEnv
from gradual_sensitivity.models.types import SType, add_effect, arrow, free_resources, unit
from gradual_sensitivity.syntax import ast

logger = logging.getLogger(__name__)


def desugar(program: ast.Program) -> ast.Expr:
    result = program.result if program.result is not None else ast.UnitLit(program.span)
    return _desugar_decls(program.decls, result)


def _desugar_decls(decls: Iterable[ast.Decl], result: ast.Expr) -> ast.Expr:
    body = desugar_expr(result)
    for decl in reversed(tuple(decls)):
        if isinstance(decl, ast.DefDecl):
            body = ast.Let(decl.name, None, desugar_def(decl), body, decl.span)
        elif decl.is_res:
            body = ast.LetRes(decl.name, desugar_expr(decl.value), body, decl.span)
        else:
            body = ast.Let(decl.name, decl.annotation, desugar_expr(decl.value), body, decl.span)
    return body


def desugar_def(decl: ast.DefDecl) -> ast.Expr:
    """``def f[r…](p…): G = e`` ⇒ ``Λr….Λx̂….fix f. λp…. (e :: G)``."""
    span = decl.span
    body = desugar_expr(decl.body)
    if decl.ret is not None:
        body = ast.Ascribe(body, decl.ret, span)

    params: list[tuple[str, SType]] = []
    for param in decl.params:
        stype = param.stype
        if param.is_res:
            widened = add_effect(stype, SensEnv.single(ResourceVar(param.name)))
            if widened is None:
                raise SensitivityTypeError(
                    f"resource parameter '{param.name}' needs a concrete type",
                    span=param.span,
                    code="E004",
                )
            stype = widened
        params.append((param.name, stype))
    if not params:
        params.append(("_", unit()))

    for name, stype in reversed(params):
        body = ast.Lambda(name, stype, body, span)

    if decl.name in free_variables(body):
        if decl.ret is None:
            raise SensitivityTypeError(
                f"recursive definition '{decl.name}' needs a return type annotation",
                span=span,
                code="E006",
                suggestion=f"write 'def {decl.name}(...): <type> = ...'",
            )
        fix_type: SType = decl.ret
        for _, stype in reversed(params):
            fix_type = arrow(stype, fix_type)
        logger.debug("Definition '%s' is recursive; wrapping in fix", decl.name)
        body = ast.Fix(decl.name, fix_type, body, span)

    resources = list(decl.resources) + [p.name for p in decl.params if p.is_res]
    for resource in reversed(resources):
        body = ast.ResLambda(resource, body, span)
    return body


def desugar_expr(expr: ast.Expr) -> ast.Expr:
    """Remove blocks (recursively); every other form is rebuilt unchanged."""
    if isinstance(expr, ast.Block):
        return _desugar_decls(expr.decls, expr.result)
    if isinstance(expr, (ast.NumLit, ast.BoolLit, ast.UnitLit, ast.Var)):
        return expr
    if isinstance(expr, ast.PrimApp):
        return ast.PrimApp(expr.op, tuple(desugar_expr(a) for a in expr.args), expr.span)
    if isinstance(expr, ast.Lambda):
        return ast.Lambda(expr.param, expr.param_type, desugar_expr(expr.body), expr.span)
    if isinstance(expr, ast.ResLambda):
        return ast.ResLambda(expr.resource, desugar_expr(expr.body), expr.span)
    if isinstance(expr, ast.Call):
        return ast.Call(
            desugar_expr(expr.fn), tuple(desugar_expr(a) for a in expr.args), expr.span
        )
    if isinstance(expr, ast.ResApp):
        return ast.ResApp(desugar_expr(expr.fn), expr.effect, expr.span)
    if isinstance(expr, ast.Ascribe):
        return ast.Ascribe(desugar_expr(expr.expr), expr.stype, expr.span)
    if isinstance(expr, ast.Pair):
        return ast.Pair(desugar_expr(expr.left), desugar_expr(expr.right), expr.span)
    if isinstance(expr, ast.Fst):
        return ast.Fst(desugar_expr(expr.expr), expr.span)
    if isinstance(expr, ast.Snd):
        return ast.Snd(desugar_expr(expr.expr), expr.span)
    if isinstance(expr, ast.Inl):
        return ast.Inl(desugar_expr(expr.expr), expr.other, expr.span)
    if isinstance(expr, ast.Inr):
        return ast.Inr(desugar_expr(expr.expr), expr.other, expr.span)
    if isinstance(expr, ast.Case):
        return ast.Case(
            desugar_expr(expr.scrutinee),
            expr.left_var,
            desugar_expr(expr.left_body),
            expr.right_var,
            desugar_expr(expr.right_body),
            expr.span,
        )
    if isinstance(expr, ast.Fold):
        return ast.Fold(expr.stype, desugar_expr(expr.expr), expr.span)
    if isinstance(expr, ast.Unfold):
        return ast.Unfold(desugar_expr(expr.expr), expr.span)
    if isinstance(expr, ast.Fix):
        return ast.Fix(expr.name, expr.stype, desugar_expr(expr.body), expr.span)
    if isinstance(expr, ast.If):
        return ast.If(
            desugar_expr(expr.cond),
            desugar_expr(expr.then),
            desugar_expr(expr.otherwise),
            expr.span,
        )
    if isinstance(expr, ast.TryCatch):
        return ast.TryCatch(desugar_expr(expr.body), desugar_expr(expr.handler), expr.span)
    if isinstance(expr, ast.Let):
        return ast.Let(
            expr.name, expr.annotation, desugar_expr(expr.value), desugar_expr(expr.body), expr.span
        )
    if isinstance(expr, ast.LetRes):
        return ast.LetRes(expr.name, desugar_expr(expr.value), desugar_expr(expr.body), expr.span)
    if isinstance(expr, ast.ListLit):
        return ast.ListLit(tuple(desugar_expr(e) for e in expr.elems), expr.elem_type, expr.span)
    if isinstance(expr, ast.IndexOf):
        return ast.IndexOf(desugar_expr(expr.lst), desugar_expr(expr.pred), expr.span)
    if isinstance(expr, ast.Length):
        return ast.Length(desugar_expr(expr.lst), expr.span)
    if isinstance(expr, ast.Get):
        return ast.Get(desugar_expr(expr.lst), desugar_expr(expr.index), expr.span)
    if isinstance(expr, ast.Laplace):
        return ast.Laplace(desugar_expr(expr.value), expr.scale, desugar_expr(expr.eps), expr.span)
    raise TypeError(f"unexpected surface node {type(expr).__name__}")


@dataclass(frozen=True, slots=True)
class ScopeAudit:
    free_variables: frozenset[str]
    free_resources: frozenset[ResourceVar]

    @property
    def closed(self) -> bool:
        return not self.free_variables and not self.free_resources


def _children(
    expr: ast.Expr,
) -> Iterator[tuple[ast.Expr, frozenset[str], frozenset[ResourceVar]]]:
    """Sub-expressions with the variables and resources each one sees bound."""
    none: frozenset[str] = frozenset()
    no_res: frozenset[ResourceVar] = frozenset()
    if isinstance(expr, (ast.NumLit, ast.BoolLit, ast.UnitLit, ast.Var)):
        return
    if isinstance(expr, ast.Lambda):
        yield expr.body, frozenset({expr.param}), no_res
    elif isinstance(expr, ast.ResLambda):
        yield expr.body, none, frozenset({ResourceVar(expr.resource)})
    elif isinstance(expr, ast.Fix):
        yield expr.body, frozenset({expr.name}), no_res
    elif isinstance(expr, ast.Case):
        yield expr.scrutinee, none, no_res
        yield expr.left_body, frozenset({expr.left_var}), no_res
        yield expr.right_body, frozenset({expr.right_var}), no_res
    elif isinstance(expr, ast.Let):
        yield expr.value, none, no_res
        yield expr.body, frozenset({expr.name}), no_res
    elif isinstance(expr, ast.LetRes):
        yield expr.value, none, no_res
        yield expr.body, frozenset({expr.name}), frozenset({ResourceVar(expr.name)})
    elif isinstance(expr, ast.Block):
        yield _desugar_decls(expr.decls, expr.result), none, no_res
    else:
        for name in expr.__dataclass_fields__:
            value = getattr(expr, name)
            if isinstance(value, tuple):
                for item in value:
                    yield item, none, no_res
            elif _is_expr(value):
                yield value, none, no_res


_EXPR_NODES = get_args(ast.Expr)


def _is_expr(value: object) -> bool:
    return isinstance(value, _EXPR_NODES)


def _annotations(expr: ast.Expr) -> Iterator[SType]:
    for attr in ("param_type", "stype", "other", "annotation", "elem_type"):
        value = getattr(expr, attr, None)
        if value is not None:
            yield value


def collect_annotations(expr: ast.Expr) -> list[SType]:
    """Every type written in ``expr`` and its sub-expressions, in source order."""
    found = list(_annotations(expr))
    for child, _, _ in _children(expr):
        found.extend(collect_annotations(child))
    return found


def _own_resources(expr: ast.Expr) -> frozenset[ResourceVar]:
    found: frozenset[ResourceVar] = frozenset()
    for stype in _annotations(expr):
        found |= free_resources(stype)
    if isinstance(expr, ast.ResApp):
        found |= expr.effect.resources()
    return found


def audit_scopes(
    expr: ast.Expr,
    bound: frozenset[str] = frozenset(),
    resources: frozenset[ResourceVar] = frozenset(),
) -> ScopeAudit:
    """Free variables and free resources of ``expr`` under the given binders."""
    free_vars: set[str] = set()
    free_res: set[ResourceVar] = set(_own_resources(expr) - resources)
    if isinstance(expr, ast.Var) and expr.name not in bound:
        free_vars.add(expr.name)
    for child, new_vars, new_res in _children(expr):
        audit = audit_scopes(child, bound | new_vars, resources | new_res)
        free_vars |= audit.free_variables
        free_res |= audit.free_resources
    return ScopeAudit(frozenset(free_vars), frozenset(free_res))


def free_variables(expr: ast.Expr, bound: Optional[frozenset[str]] = None) -> frozenset[str]:
    return audit_scopes(expr, bound or frozenset()).free_variables
