"""Pulling workflow code out of free-form LLM replies."""

from __future__ import annotations

import re

from ..errors import DslSyntaxError, ExtractionError
from . import ast
from .parser import parse

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_+-]*[ \t]*\n(.*?)```", re.DOTALL)


def _has_action(program: ast.Program) -> bool:
    """True when the program assigns or calls something.

    Bare prose occasionally tokenizes as a run of identifiers; requiring
    an assignment or call keeps the no-fence fallback from accepting it.
    """

    def expr_acts(expr: ast.Expr) -> bool:
        if isinstance(expr, ast.Call):
            return True
        if isinstance(expr, ast.ListLit):
            return any(expr_acts(e) for e in expr.items)
        if isinstance(expr, ast.Index):
            return expr_acts(expr.target) or expr_acts(expr.index)
        if isinstance(expr, ast.Binary):
            return expr_acts(expr.lhs) or expr_acts(expr.rhs)
        return False

    def stmt_acts(stmt: ast.Statement) -> bool:
        if isinstance(stmt, ast.Assign):
            return True
        if isinstance(stmt, ast.ExprStmt):
            return expr_acts(stmt.expr)
        if isinstance(stmt, ast.For):
            return True
        if isinstance(stmt, ast.If):
            return True
        return False

    return any(stmt_acts(s) for s in program.statements)


def extract_code(llm_reply: str) -> str:
    """Code from the first fenced block, else the longest parseable suffix."""
    fenced = _FENCE_RE.search(llm_reply)
    if fenced:
        return fenced.group(1).strip("\n")
    lines = llm_reply.splitlines()
    for start in range(len(lines)):
        candidate = "\n".join(lines[start:]).strip()
        if not candidate:
            continue
        try:
            program = parse(candidate)
        except DslSyntaxError:
            continue
        if program.statements and _has_action(program):
            return candidate
    raise ExtractionError(llm_reply)
