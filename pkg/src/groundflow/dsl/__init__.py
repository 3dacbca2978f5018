from . import ast
from .ast import Program, to_source
from .extract import extract_code
from .interp import (
    BUILTIN_ARITIES,
    BUILTIN_NAMES,
    ExecLimits,
    ExecResult,
    TraceEntry,
    execute,
    round_half_away,
)
from .parser import parse
from .validate import Diagnostic, validate

__all__ = [
    "BUILTIN_ARITIES",
    "BUILTIN_NAMES",
    "Diagnostic",
    "ExecLimits",
    "ExecResult",
    "Program",
    "TraceEntry",
    "ast",
    "execute",
    "extract_code",
    "parse",
    "round_half_away",
    "to_source",
    "validate",
]
