"""Exception hierarchy shared across the package.

Domain errors derive from GroundflowError so callers (CLI, HTTP service,
benchmark runner) can separate expected failures from bugs.
"""

from __future__ import annotations


class GroundflowError(Exception):
    """Base class for all expected domain errors."""


class ConfigError(GroundflowError):
    """Invalid or incomplete configuration."""


# --- corpus ---------------------------------------------------------------


class CorpusError(GroundflowError):
    pass


class RetryableSourceError(CorpusError):
    """Network-level failure after the configured number of attempts."""

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class SourceParseError(CorpusError):
    """Malformed remote filing index; carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class IntegrityError(CorpusError):
    """Downloaded or stored content violates a corpus invariant."""


class HttpStatusError(CorpusError):
    def __init__(self, url: str, status: int):
        super().__init__(f"GET {url} returned status {status}")
        self.status = status
        self.url = url


# --- fund report APIs ------------------------------------------------------


class NoMatchError(GroundflowError):
    """No candidate scored at or above the fuzzy-match threshold.

    Carries the top candidates so callers can surface useful suggestions.
    """

    def __init__(self, query: str, candidates: list[tuple[str, float]]):
        listing = ", ".join(f"{name!r} ({score:.1f})" for name, score in candidates)
        super().__init__(f"no match for {query!r}; closest: {listing or 'none'}")
        self.query = query
        self.candidates = candidates


class LabelNotFoundError(GroundflowError):
    """A labeled value was requested but no label matched."""


class ValueParseError(GroundflowError):
    """A labeled value matched but its text is not a parseable number."""

    def __init__(self, label: str, token: str):
        super().__init__(f"value for {label!r} is not numeric: {token!r}")
        self.token = token


# --- LLM gateway ------------------------------------------------------------


class GatewayError(GroundflowError):
    pass


class GatewayTransportError(GatewayError):
    """Transport-level failure; safe to retry."""

    retryable = True


class EmptyCompletionError(GatewayError):
    """Backend returned an empty or refused completion."""


class UnknownPromptError(GatewayError):
    """Scripted backend in strict mode saw a prompt hash it has no reply for."""

    def __init__(self, prompt_hash: str):
        super().__init__(f"no scripted reply for prompt hash {prompt_hash}")
        self.prompt_hash = prompt_hash


class DimensionMismatchError(GatewayError):
    pass


class ZeroVectorError(GatewayError):
    """Cosine similarity is undefined for an all-zero vector."""


# --- workflow language -------------------------------------------------------


class DslError(GroundflowError):
    pass


class ExtractionError(DslError):
    """No workflow code could be extracted from an LLM reply."""

    def __init__(self, reply: str):
        super().__init__("reply contains no extractable workflow code")
        self.reply = reply


class DslSyntaxError(DslError):
    """Lex or parse failure with position and expectation info."""

    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        loc = f"line {line}, column {col}"
        if expected:
            message = f"{message}; expected one of: {', '.join(sorted(expected))}"
        super().__init__(f"{message} ({loc})")
        self.line = line
        self.col = col
        self.expected = expected


class DslRuntimeError(DslError):
    pass


class ResourceLimitError(DslRuntimeError):
    """A step, API-call, or value-size budget was exhausted."""

    def __init__(self, budget: str, limit: int | float):
        super().__init__(f"{budget} budget exhausted (limit {limit})")
        self.budget = budget


class DslArithmeticError(DslRuntimeError):
    pass


class DslTypeError(DslRuntimeError):
    pass


class DslNameError(DslRuntimeError):
    pass


class ApiRuntimeError(DslRuntimeError):
    """A registered API raised during workflow execution.

    Carries the trace prefix accumulated before the failure.
    """

    def __init__(self, message: str, cause: Exception, trace: list):
        super().__init__(message)
        self.cause = cause
        self.trace = trace


# --- orchestration & service --------------------------------------------------


class SessionStateError(GroundflowError):
    """Operation not allowed in the session's current state."""


class BenchError(GroundflowError):
    pass


class DatasetError(GroundflowError):
    pass


class TokenBudgetError(GroundflowError):
    """A prompt cannot fit its token budget even after truncation."""
