"""Static checks run before any workflow executes.

A program is executable only when every call resolves to a registered API
or builtin with the right arity and every variable is assigned before it
is read. Misspelled function names get a nearest-name suggestion, since
bad call names are the dominant failure mode of generated code.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..fuzz import similarity
from . import ast
from .interp import BUILTIN_ARITIES

SUGGESTION_FLOOR = 55.0


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.code} at line {self.line}, column {self.col}: {self.message}"


def _suggest(name: str, known: list[str]) -> str:
    scored = sorted((similarity(name, k) for k in known), key=lambda m: (-m.score, m.candidate))
    if scored and scored[0].score >= SUGGESTION_FLOOR:
        return f"; did you mean {scored[0].candidate!r}?"
    return ""


def validate(program: ast.Program, registry_arities: dict[str, int]) -> list[Diagnostic]:
    """All diagnostics for ``program``; empty means executable."""
    known: dict[str, tuple[int, int]] = {
        name: (arity, arity) for name, arity in registry_arities.items()
    }
    known.update(BUILTIN_ARITIES)
    known_names = sorted(known)
    diagnostics: list[Diagnostic] = []
    assigned: set[str] = set()

    def check_expr(expr: ast.Expr) -> None:
        if isinstance(expr, ast.Var):
            if expr.name not in assigned:
                diagnostics.append(
                    Diagnostic(
                        code="unassigned-variable",
                        message=f"variable {expr.name!r} is read before assignment",
                        line=expr.line,
                        col=expr.col,
                    )
                )
            return
        if isinstance(expr, ast.Call):
            if expr.name not in known:
                diagnostics.append(
                    Diagnostic(
                        code="unknown-function",
                        message=f"unknown function {expr.name!r}"
                        + _suggest(expr.name, known_names),
                        line=expr.line,
                        col=expr.col,
                    )
                )
            else:
                low, high = known[expr.name]
                if not (low <= len(expr.args) <= high):
                    wanted = str(low) if low == high else f"{low}..{high if high < 99 else 'n'}"
                    diagnostics.append(
                        Diagnostic(
                            code="arity",
                            message=(
                                f"{expr.name} takes {wanted} argument(s), got {len(expr.args)}"
                            ),
                            line=expr.line,
                            col=expr.col,
                        )
                    )
            for arg in expr.args:
                check_expr(arg)
            return
        if isinstance(expr, ast.ListLit):
            for item in expr.items:
                check_expr(item)
            return
        if isinstance(expr, ast.Index):
            check_expr(expr.target)
            check_expr(expr.index)
            return
        if isinstance(expr, ast.Binary):
            check_expr(expr.lhs)
            check_expr(expr.rhs)
            return
        # literals need no checking

    def check_block(statements: tuple[ast.Statement, ...]) -> None:
        for stmt in statements:
            if isinstance(stmt, ast.Assign):
                check_expr(stmt.expr)
                assigned.add(stmt.name)
            elif isinstance(stmt, ast.ExprStmt):
                check_expr(stmt.expr)
            elif isinstance(stmt, ast.For):
                check_expr(stmt.iterable)
                assigned.add(stmt.var)
                check_block(stmt.body)
            elif isinstance(stmt, ast.If):
                check_expr(stmt.cond)
                check_block(stmt.then_body)
                check_block(stmt.else_body)

    check_block(program.statements)
    return diagnostics
