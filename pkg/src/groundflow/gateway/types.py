"""Chat and embedding primitives shared by every backend."""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from ..errors import DimensionMismatchError, ZeroVectorError

ROLES = ("system", "user", "assistant")
DEFAULT_MODEL_ID = "gpt-3.5-turbo"


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}, got {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")


@dataclass(frozen=True)
class ChatParams:
    model_id: str = DEFAULT_MODEL_ID
    temperature: float = 0.0
    max_tokens: int = 1024

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dimension(self) -> int:
        return len(self.values)

    def __post_init__(self) -> None:
        if any(not math.isfinite(v) for v in self.values):
            raise ValueError("embedding values must be finite")


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity in [-1, 1]; undefined for zero vectors."""
    if a.dimension != b.dimension:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}"
        )
    # scale by the largest component so tiny vectors cannot underflow to zero
    scale_a = max((abs(x) for x in a.values), default=0.0)
    scale_b = max((abs(y) for y in b.values), default=0.0)
    if scale_a == 0.0 or scale_b == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for a zero vector")
    xs = [x / scale_a for x in a.values]
    ys = [y / scale_b for y in b.values]
    dot = sum(x * y for x, y in zip(xs, ys))
    norm_x = math.sqrt(sum(x * x for x in xs))
    norm_y = math.sqrt(sum(y * y for y in ys))
    return max(-1.0, min(1.0, dot / (norm_x * norm_y)))


class ChatGateway(Protocol):
    def chat(self, history: list[ChatMessage], params: ChatParams) -> str: ...


class EmbeddingGateway(Protocol):
    def embed(self, text: str) -> EmbeddingVector: ...


@dataclass
class TranscriptLog:
    """Append-only JSONL record of every chat exchange, serialized per log."""

    path: Path
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, history: list[ChatMessage], reply: str) -> None:
        entry = {
            "history": [{"role": m.role, "content": m.content} for m in history],
            "reply": reply,
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry) + "\n")

    def read(self) -> list[dict]:
        with self.path.open(encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]
