"""AST for the restricted workflow language.

Position fields do not participate in equality, so structural comparison
(and the parse/print round-trip property) ignores layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, kw_only=True)
    col: int = field(default=0, compare=False, kw_only=True)


# -- expressions ---------------------------------------------------------------


@dataclass(frozen=True)
class Expr(Node):
    pass


@dataclass(frozen=True)
class StringLit(Expr):
    value: str


@dataclass(frozen=True)
class NumberLit(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class ListLit(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Index(Expr):
    target: Expr
    index: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    lhs: Expr
    rhs: Expr


# -- statements -----------------------------------------------------------------


@dataclass(frozen=True)
class Statement(Node):
    pass


@dataclass(frozen=True)
class Assign(Statement):
    name: str
    expr: Expr


@dataclass(frozen=True)
class ExprStmt(Statement):
    expr: Expr


@dataclass(frozen=True)
class For(Statement):
    var: str
    iterable: Expr
    body: tuple[Statement, ...]


@dataclass(frozen=True)
class If(Statement):
    cond: Expr
    then_body: tuple[Statement, ...]
    else_body: tuple[Statement, ...]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]
    source: str = field(default="", compare=False)


# -- printer ---------------------------------------------------------------------

_PRECEDENCE = {
    "==": 1, "!=": 1, "<": 1, ">": 1, "<=": 1, ">=": 1,
    "+": 2, "-": 2,
    "*": 3, "/": 3,
}


def _expr_source(expr: Expr, parent_prec: int = 0) -> str:
    if isinstance(expr, StringLit):
        escaped = expr.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    if isinstance(expr, NumberLit):
        value = expr.value
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, ListLit):
        return "[" + ", ".join(_expr_source(item) for item in expr.items) + "]"
    if isinstance(expr, Call):
        return f"{expr.name}(" + ", ".join(_expr_source(a) for a in expr.args) + ")"
    if isinstance(expr, Index):
        return f"{_expr_source(expr.target, 9)}[{_expr_source(expr.index)}]"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        # comparison is non-associative, so nested comparisons need parens
        lhs_prec = prec + 1 if prec == 1 else prec
        text = (
            f"{_expr_source(expr.lhs, lhs_prec)} {expr.op} {_expr_source(expr.rhs, prec + 1)}"
        )
        return f"({text})" if prec < parent_prec else text
    raise TypeError(f"unknown expression node: {expr!r}")


def _stmt_lines(stmt: Statement, indent: int) -> list[str]:
    pad = "    " * indent
    if isinstance(stmt, Assign):
        return [f"{pad}{stmt.name} = {_expr_source(stmt.expr)}"]
    if isinstance(stmt, ExprStmt):
        return [f"{pad}{_expr_source(stmt.expr)}"]
    if isinstance(stmt, For):
        lines = [f"{pad}for {stmt.var} in {_expr_source(stmt.iterable)} {{"]
        for inner in stmt.body:
            lines.extend(_stmt_lines(inner, indent + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, If):
        lines = [f"{pad}if {_expr_source(stmt.cond)} {{"]
        for inner in stmt.then_body:
            lines.extend(_stmt_lines(inner, indent + 1))
        if stmt.else_body:
            lines.append(f"{pad}}} else {{")
            for inner in stmt.else_body:
                lines.extend(_stmt_lines(inner, indent + 1))
        lines.append(f"{pad}}}")
        return lines
    raise TypeError(f"unknown statement node: {stmt!r}")


def to_source(program: Program) -> str:
    """Canonical source text; parsing it yields a structurally equal AST."""
    lines: list[str] = []
    for stmt in program.statements:
        lines.extend(_stmt_lines(stmt, 0))
    return "\n".join(lines)
