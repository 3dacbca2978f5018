"""Sandboxed tree-walking interpreter for workflow programs.

The only capabilities a program can reach are the registry bindings
passed in and the fixed builtin table; the language has no import, file,
attribute, or host-object access at all. Execution is bounded by a step
budget, an API-call budget, and a per-value size budget, so hostile or
runaway programs terminate with a resource error.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from ..errors import (
    ApiRuntimeError,
    DslArithmeticError,
    DslNameError,
    DslRuntimeError,
    DslTypeError,
    GroundflowError,
    ResourceLimitError,
)
from . import ast

BUILTIN_ARITIES: dict[str, tuple[int, int]] = {
    "sum": (1, 1),
    "len": (1, 1),
    "round": (1, 2),
    "min": (1, 99),
    "max": (1, 99),
    "str": (1, 1),
    "num": (1, 1),
    "append": (2, 2),
    "unique": (1, 1),
    "sort": (1, 1),
}

BUILTIN_NAMES = frozenset(BUILTIN_ARITIES)


@dataclass(frozen=True)
class ExecLimits:
    max_steps: int = 100_000
    max_api_calls: int = 5_000
    max_value_bytes: int = 16 * 1024 * 1024

    def __post_init__(self) -> None:
        if min(self.max_steps, self.max_api_calls, self.max_value_bytes) <= 0:
            raise ValueError("all execution limits must be positive")


@dataclass(frozen=True)
class TraceEntry:
    step: int
    name: str
    args: tuple[str, ...]
    digest: str

    def to_json_obj(self) -> dict:
        return {"step": self.step, "name": self.name, "args": list(self.args), "digest": self.digest}


@dataclass
class ExecResult:
    answer: object
    api_call_trace: list[TraceEntry] = field(default_factory=list)
    steps_used: int = 0


def round_half_away(x: float, ndigits: int = 0) -> float:
    """Round with ties going away from zero, matching the scoring metric."""
    scale = 10.0 ** ndigits
    scaled = abs(x) * scale
    return math.copysign(math.floor(scaled + 0.5) / scale, x)


def short_repr(value: object, limit: int = 80) -> str:
    """Compact, stable rendering of a value for trace entries."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        text = value if len(value) <= limit else value[: limit - 3] + "..."
        return repr(text)
    if isinstance(value, list):
        inner = ", ".join(short_repr(v, 24) for v in value[:8])
        suffix = ", ..." if len(value) > 8 else ""
        return f"[{inner}{suffix}]"
    tag = getattr(value, "fund_name", None)
    ref = getattr(value, "ref", None) or getattr(value, "source", None)
    acc = getattr(ref, "accession_number", None)
    name = type(value).__name__
    if tag is not None and acc is not None:
        return f"{name}<{acc}:{tag}>"
    if acc is not None:
        return f"{name}<{acc}>"
    return f"{name}<>"


def value_digest(value: object) -> str:
    return hashlib.sha256(short_repr(value, limit=256).encode("utf-8")).hexdigest()[:12]


def _value_size(value: object) -> int:
    if isinstance(value, str):
        return 49 + len(value)
    if isinstance(value, (float, bool)):
        return 24
    if isinstance(value, list):
        return 56 + sum(_value_size(v) for v in value)
    return 64


def _type_name(value: object) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, float):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "list"
    return type(value).__name__


class _Interpreter:
    def __init__(self, bindings: dict[str, object], limits: ExecLimits):
        self.bindings = bindings
        self.limits = limits
        self.env: dict[str, object] = {}
        self.trace: list[TraceEntry] = []
        self.steps = 0
        self.api_calls = 0
        self.last_expr_value: object | None = None
        self.has_expr_value = False

    # -- budgets ------------------------------------------------------------

    def _step(self) -> None:
        self.steps += 1
        if self.steps > self.limits.max_steps:
            raise ResourceLimitError("step", self.limits.max_steps)

    def _charge_value(self, value: object) -> object:
        if _value_size(value) > self.limits.max_value_bytes:
            raise ResourceLimitError("value size", self.limits.max_value_bytes)
        return value

    # -- statements -----------------------------------------------------------

    def run_block(self, statements: tuple[ast.Statement, ...]) -> None:
        for stmt in statements:
            self._step()
            if isinstance(stmt, ast.Assign):
                self.env[stmt.name] = self._charge_value(self.eval(stmt.expr))
            elif isinstance(stmt, ast.ExprStmt):
                self.last_expr_value = self.eval(stmt.expr)
                self.has_expr_value = True
            elif isinstance(stmt, ast.For):
                self._run_for(stmt)
            elif isinstance(stmt, ast.If):
                cond = self.eval(stmt.cond)
                if not isinstance(cond, bool):
                    raise DslTypeError(
                        f"if condition must be a comparison result, got {_type_name(cond)}"
                    )
                self.run_block(stmt.then_body if cond else stmt.else_body)
            else:
                raise DslRuntimeError(f"unknown statement: {stmt!r}")

    def _run_for(self, stmt: ast.For) -> None:
        iterable = self.eval(stmt.iterable)
        if not isinstance(iterable, list):
            raise DslTypeError(f"for loop needs a list, got {_type_name(iterable)}")
        # index-based so a loop observes growth of the list it iterates
        i = 0
        while i < len(iterable):
            self._step()
            self.env[stmt.var] = self._charge_value(iterable[i])
            self.run_block(stmt.body)
            i += 1

    # -- expressions -----------------------------------------------------------

    def eval(self, expr: ast.Expr) -> object:
        self._step()
        if isinstance(expr, ast.NumberLit):
            return expr.value
        if isinstance(expr, ast.StringLit):
            return expr.value
        if isinstance(expr, ast.Var):
            if expr.name not in self.env:
                raise DslNameError(f"variable {expr.name!r} is not defined")
            return self.env[expr.name]
        if isinstance(expr, ast.ListLit):
            return [self.eval(item) for item in expr.items]
        if isinstance(expr, ast.Index):
            return self._eval_index(expr)
        if isinstance(expr, ast.Binary):
            return self._eval_binary(expr)
        if isinstance(expr, ast.Call):
            return self._eval_call(expr)
        raise DslRuntimeError(f"unknown expression: {expr!r}")

    def _eval_index(self, expr: ast.Index) -> object:
        target = self.eval(expr.target)
        index = self.eval(expr.index)
        if not isinstance(target, list):
            raise DslTypeError(f"only lists can be indexed, got {_type_name(target)}")
        if not isinstance(index, float) or isinstance(index, bool) or index != int(index):
            raise DslTypeError("list index must be a whole number")
        i = int(index)
        if not 0 <= i < len(target):
            raise DslRuntimeError(f"list index {i} out of range (length {len(target)})")
        return target[i]

    def _eval_binary(self, expr: ast.Binary) -> object:
        op = expr.op
        lhs = self.eval(expr.lhs)
        rhs = self.eval(expr.rhs)
        if op in ("==", "!="):
            same = type(lhs) is type(rhs) and lhs == rhs
            return same if op == "==" else not same
        if op == "+":
            if isinstance(lhs, str) and isinstance(rhs, str):
                return self._charge_value(lhs + rhs)
            if self._both_numbers(lhs, rhs):
                return lhs + rhs
            raise DslTypeError(
                f"cannot add {_type_name(lhs)} and {_type_name(rhs)}"
            )
        if op in ("-", "*", "/"):
            if not self._both_numbers(lhs, rhs):
                raise DslTypeError(
                    f"operator {op} needs numbers, got {_type_name(lhs)} and {_type_name(rhs)}"
                )
            if op == "-":
                return lhs - rhs
            if op == "*":
                return lhs * rhs
            if rhs == 0.0:
                raise DslArithmeticError("division by zero")
            return lhs / rhs
        if op in ("<", ">", "<=", ">="):
            if self._both_numbers(lhs, rhs) or (isinstance(lhs, str) and isinstance(rhs, str)):
                if op == "<":
                    return lhs < rhs
                if op == ">":
                    return lhs > rhs
                if op == "<=":
                    return lhs <= rhs
                return lhs >= rhs
            raise DslTypeError(
                f"operator {op} needs two numbers or two strings, "
                f"got {_type_name(lhs)} and {_type_name(rhs)}"
            )
        raise DslRuntimeError(f"unknown operator {op!r}")

    @staticmethod
    def _both_numbers(a: object, b: object) -> bool:
        return (
            isinstance(a, float)
            and isinstance(b, float)
            and not isinstance(a, bool)
            and not isinstance(b, bool)
        )

    def _eval_call(self, expr: ast.Call) -> object:
        args = [self.eval(a) for a in expr.args]
        if expr.name in BUILTIN_NAMES:
            return self._call_builtin(expr.name, args)
        if expr.name in self.bindings:
            return self._call_api(expr.name, args)
        raise DslNameError(f"unknown function {expr.name!r}")

    def _call_api(self, name: str, args: list[object]) -> object:
        self.api_calls += 1
        if self.api_calls > self.limits.max_api_calls:
            raise ResourceLimitError("api call", self.limits.max_api_calls)
        fn = self.bindings[name]
        try:
            result = fn(*args)  # type: ignore[operator]
        except GroundflowError as exc:
            raise ApiRuntimeError(
                f"{name} failed: {exc}", cause=exc, trace=list(self.trace)
            ) from exc
        result = self._from_api(result)
        self.trace.append(
            TraceEntry(
                step=self.steps,
                name=name,
                args=tuple(short_repr(a) for a in args),
                digest=value_digest(result),
            )
        )
        return self._charge_value(result)

    @staticmethod
    def _from_api(value: object) -> object:
        if isinstance(value, bool) or value is None:
            raise DslTypeError(f"API returned unsupported value: {value!r}")
        if isinstance(value, int):
            return float(value)
        if isinstance(value, (list, tuple)):
            return [(_Interpreter._from_api(v)) for v in value]
        return value

    def _call_builtin(self, name: str, args: list[object]) -> object:
        if name == "sum":
            items = self._want_list(name, args[0])
            total = 0.0
            for v in items:
                if not isinstance(v, float) or isinstance(v, bool):
                    raise DslTypeError("sum needs a list of numbers")
                total += v
            return total
        if name == "len":
            target = args[0]
            if isinstance(target, (list, str)):
                return float(len(target))
            raise DslTypeError(f"len needs a list or string, got {_type_name(target)}")
        if name == "round":
            x = args[0]
            if not isinstance(x, float) or isinstance(x, bool):
                raise DslTypeError("round needs a number")
            ndigits = 0
            if len(args) == 2:
                nd = args[1]
                if not isinstance(nd, float) or nd != int(nd):
                    raise DslTypeError("round digits must be a whole number")
                ndigits = int(nd)
            return round_half_away(x, ndigits)
        if name in ("min", "max"):
            values = self._want_list(name, args[0]) if len(args) == 1 else args
            if not values:
                raise DslRuntimeError(f"{name} of an empty list")
            if all(self._both_numbers(v, 0.0) for v in values):
                return min(values) if name == "min" else max(values)  # type: ignore[type-var]
            if all(isinstance(v, str) for v in values):
                return min(values) if name == "min" else max(values)  # type: ignore[type-var]
            raise DslTypeError(f"{name} needs all numbers or all strings")
        if name == "str":
            value = args[0]
            if isinstance(value, str):
                return value
            if isinstance(value, float) and not isinstance(value, bool):
                return repr(value)
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, list):
                return short_repr(value, limit=10_000)
            raise DslTypeError(f"str cannot render {_type_name(value)}")
        if name == "num":
            value = args[0]
            if isinstance(value, float) and not isinstance(value, bool):
                return value
            if isinstance(value, str):
                try:
                    return float(value.replace(",", ""))
                except ValueError:
                    raise DslTypeError(f"num cannot parse {value!r}") from None
            raise DslTypeError(f"num needs a string or number, got {_type_name(value)}")
        if name == "append":
            target = self._want_list(name, args[0])
            target.append(args[1])
            return self._charge_value(target)
        if name == "unique":
            items = self._want_list(name, args[0])
            seen: set = set()
            out = []
            for v in items:
                if not isinstance(v, (str, float, bool)):
                    raise DslTypeError("unique needs strings or numbers")
                key = (type(v).__name__, v)
                if key not in seen:
                    seen.add(key)
                    out.append(v)
            return out
        if name == "sort":
            items = self._want_list(name, args[0])
            if all(self._both_numbers(v, 0.0) for v in items) or all(
                isinstance(v, str) for v in items
            ):
                return sorted(items)  # type: ignore[type-var]
            raise DslTypeError("sort needs all numbers or all strings")
        raise DslNameError(f"unknown builtin {name!r}")

    @staticmethod
    def _want_list(name: str, value: object) -> list:
        if not isinstance(value, list):
            raise DslTypeError(f"{name} needs a list, got {_type_name(value)}")
        return value


def _check_answer(value: object) -> object:
    if isinstance(value, bool):
        raise DslTypeError("answer must be a string, a number, or a list of them")
    if isinstance(value, (str, float)):
        return value
    if isinstance(value, list):
        if all(isinstance(v, str) for v in value):
            return value
        if all(isinstance(v, float) and not isinstance(v, bool) for v in value):
            return value
        raise DslTypeError("answer list must hold only strings or only numbers")
    raise DslTypeError(f"answer must be data, not {_type_name(value)}")


def execute(
    program: ast.Program,
    registry_bindings: dict[str, object],
    limits: ExecLimits | None = None,
) -> ExecResult:
    """Run a validated program and return its answer plus the API trace."""
    limits = limits or ExecLimits()
    interp = _Interpreter(registry_bindings, limits)
    interp.run_block(program.statements)
    if "answer" in interp.env:
        answer = interp.env["answer"]
    elif interp.has_expr_value:
        answer = interp.last_expr_value
    else:
        raise DslRuntimeError(
            "program produced no answer: assign to 'answer' or end with an expression"
        )
    return ExecResult(
        answer=_check_answer(answer),
        api_call_trace=interp.trace,
        steps_used=interp.steps,
    )
