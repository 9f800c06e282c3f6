"""Render surface programs back to concrete syntax.

Compound operands are always parenthesised, so ``parse(pretty(p))`` rebuilds
the same tree (spans aside) and printing is idempotent after one round trip.
"""
from __future__ import annotations

from gradual_sensitivity.models.sensitivity import format_sens
from gradual_sensitivity.syntax import ast

_ATOMIC = (
    ast.NumLit, ast.BoolLit, ast.UnitLit, ast.Var, ast.Call, ast.ResApp, ast.Pair,
    ast.Fst, ast.Snd, ast.Inl, ast.Inr, ast.Fold, ast.Unfold, ast.ListLit, ast.IndexOf,
    ast.Length, ast.Get, ast.Laplace, ast.Block,
)


def pretty_program(program: ast.Program) -> str:
    lines = [pretty_decl(decl) for decl in program.decls]
    if program.result is not None:
        lines.append(pretty(program.result))
    return "\n".join(lines)


def pretty_decl(decl: ast.Decl) -> str:
    if isinstance(decl, ast.DefDecl):
        binders = f"[{', '.join(decl.resources)}]" if decl.resources else ""
        params = ", ".join(
            f"{'res ' if p.is_res else ''}{p.name}: {p.stype}" for p in decl.params
        )
        ret = f": {decl.ret}" if decl.ret is not None else ""
        return f"def {decl.name}{binders}({params}){ret} = {pretty(decl.body)};"
    keyword = "let res" if decl.is_res else "let"
    annotation = f": {decl.annotation}" if decl.annotation is not None else ""
    return f"{keyword} {decl.name}{annotation} = {pretty(decl.value)};"


def _number(value: float) -> str:
    text = format_sens(abs(value))
    return f"-{text}" if value < 0 else text


def _operand(expr: ast.Expr) -> str:
    text = pretty(expr)
    if isinstance(expr, ast.NumLit) and expr.value < 0:
        return f"({text})"
    return text if isinstance(expr, _ATOMIC) else f"({text})"


def _block(expr: ast.Expr) -> str:
    if isinstance(expr, ast.Block):
        return pretty(expr)
    return f"{{ {pretty(expr)} }}"


def pretty(expr: ast.Expr) -> str:
    if isinstance(expr, ast.NumLit):
        return _number(expr.value)
    if isinstance(expr, ast.BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, ast.UnitLit):
        return "unit"
    if isinstance(expr, ast.Var):
        return expr.name
    if isinstance(expr, ast.PrimApp):
        if len(expr.args) == 1:
            symbol = "-" if expr.op.value == "neg" else expr.op.value
            return f"{symbol}{_operand(expr.args[0])}"
        left, right = expr.args
        return f"{_operand(left)} {expr.op.value} {_operand(right)}"
    if isinstance(expr, ast.Lambda):
        return f"fn ({expr.param}: {expr.param_type}) => {pretty(expr.body)}"
    if isinstance(expr, ast.ResLambda):
        return f"fn [{expr.resource}] => {pretty(expr.body)}"
    if isinstance(expr, ast.Call):
        args = ", ".join(pretty(a) for a in expr.args)
        return f"{_operand(expr.fn)}({args})"
    if isinstance(expr, ast.ResApp):
        return f"{_operand(expr.fn)}[{expr.effect}]"
    if isinstance(expr, ast.Ascribe):
        return f"{_operand(expr.expr)} :: {expr.stype}"
    if isinstance(expr, ast.Pair):
        return f"({pretty(expr.left)}, {pretty(expr.right)})"
    if isinstance(expr, ast.Fst):
        return f"fst({pretty(expr.expr)})"
    if isinstance(expr, ast.Snd):
        return f"snd({pretty(expr.expr)})"
    if isinstance(expr, ast.Inl):
        return f"inl<{expr.other}>({pretty(expr.expr)})"
    if isinstance(expr, ast.Inr):
        return f"inr<{expr.other}>({pretty(expr.expr)})"
    if isinstance(expr, ast.Case):
        return (
            f"case {pretty(expr.scrutinee)} of {{ inl {expr.left_var} => {pretty(expr.left_body)}"
            f" | inr {expr.right_var} => {pretty(expr.right_body)} }}"
        )
    if isinstance(expr, ast.Fold):
        return f"fold<{expr.stype}>({pretty(expr.expr)})"
    if isinstance(expr, ast.Unfold):
        return f"unfold({pretty(expr.expr)})"
    if isinstance(expr, ast.Fix):
        return f"fix ({expr.name}: {expr.stype}) => {pretty(expr.body)}"
    if isinstance(expr, ast.If):
        return (
            f"if {pretty(expr.cond)} then {pretty(expr.then)} else {pretty(expr.otherwise)}"
        )
    if isinstance(expr, ast.TryCatch):
        return f"try {_block(expr.body)} catch {_block(expr.handler)}"
    if isinstance(expr, ast.Let):
        annotation = f": {expr.annotation}" if expr.annotation is not None else ""
        return f"{{ let {expr.name}{annotation} = {pretty(expr.value)}; {pretty(expr.body)} }}"
    if isinstance(expr, ast.LetRes):
        return f"{{ let res {expr.name} = {pretty(expr.value)}; {pretty(expr.body)} }}"
    if isinstance(expr, ast.ListLit):
        elem = f"<{expr.elem_type}>" if expr.elem_type is not None else ""
        return f"List{elem}({', '.join(pretty(e) for e in expr.elems)})"
    if isinstance(expr, ast.IndexOf):
        return f"indexOf({pretty(expr.lst)}, {pretty(expr.pred)})"
    if isinstance(expr, ast.Length):
        return f"length({pretty(expr.lst)})"
    if isinstance(expr, ast.Get):
        return f"get({pretty(expr.lst)}, {pretty(expr.index)})"
    if isinstance(expr, ast.Laplace):
        return f"laplace({pretty(expr.value)}, {_number(expr.scale)}, {pretty(expr.eps)})"
    if isinstance(expr, ast.Block):
        decls = " ".join(pretty_decl(d) for d in expr.decls)
        return f"{{ {decls} {pretty(expr.result)} }}"
    raise TypeError(f"unexpected surface node {type(expr).__name__}")
