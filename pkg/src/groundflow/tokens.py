"""Pluggable token counting and truncation.

Hosted-model token limits are expressed in counted tokens. The default
counter approximates one token per four UTF-8 bytes, which is deliberately
conservative and documented as approximate; any exact counter satisfying
this interface can be swapped in without touching truncation contracts.
"""

from __future__ import annotations

import math
from typing import Protocol

EMBED_TOKEN_LIMIT = 8191
PROMPT_TOKEN_LIMIT = 4096


class TokenCounter(Protocol):
    def count(self, text: str) -> int: ...

    def truncate(self, text: str, max_tokens: int) -> str: ...


class ApproxTokenCounter:
    """ceil(utf8_bytes / 4) token approximation with prefix truncation."""

    bytes_per_token = 4

    def count(self, text: str) -> int:
        if not text:
            return 0
        return math.ceil(len(text.encode("utf-8")) / self.bytes_per_token)

    def truncate(self, text: str, max_tokens: int) -> str:
        if max_tokens < 0:
            raise ValueError("max_tokens must be non-negative")
        raw = text.encode("utf-8")
        budget = max_tokens * self.bytes_per_token
        if len(raw) <= budget:
            return text
        return raw[:budget].decode("utf-8", errors="ignore")


DEFAULT_COUNTER = ApproxTokenCounter()
