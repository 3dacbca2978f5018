"""Deterministic scripted chat backend keyed on hashed message history.

Replies are looked up by a stable hash of the normalized conversation so
an entire multi-turn exchange can be recorded once and replayed
byte-identically in tests. Replay files are JSONL of
``{"prompt_hash": ..., "prompt_text": ..., "reply": ...}``; prompt_text is
redundant with the hash and exists so fixture files stay reviewable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..errors import EmptyCompletionError, UnknownPromptError
from .types import ChatMessage, ChatParams, TranscriptLog


def normalize_content(content: str) -> str:
    return "\n".join(line.rstrip() for line in content.strip().splitlines())


def prompt_hash(history: list[ChatMessage]) -> str:
    canonical = json.dumps(
        [{"role": m.role, "content": normalize_content(m.content)} for m in history],
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def render_prompt_text(history: list[ChatMessage]) -> str:
    return "\n".join(f"[{m.role}] {normalize_content(m.content)}" for m in history)


class ScriptedChatBackend:
    def __init__(
        self,
        replies: dict[str, str] | None = None,
        strict: bool = True,
        default_reply: str = "OK.",
        transcript: TranscriptLog | None = None,
    ):
        self.replies = dict(replies or {})
        self.strict = strict
        self.default_reply = default_reply
        self.transcript = transcript

    @classmethod
    def from_replay_file(cls, path: str | Path, **kwargs) -> "ScriptedChatBackend":
        replies: dict[str, str] = {}
        for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                replies[entry["prompt_hash"]] = entry["reply"]
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}: bad replay entry on line {i}: {exc}") from exc
        return cls(replies=replies, **kwargs)

    def add(self, history: list[ChatMessage], reply: str) -> str:
        """Register a reply for a conversation state; returns the hash."""
        key = prompt_hash(history)
        self.replies[key] = reply
        return key

    def chat(self, history: list[ChatMessage], params: ChatParams) -> str:
        if not history:
            raise ValueError("chat history must be non-empty")
        key = prompt_hash(history)
        if key not in self.replies:
            if self.strict:
                raise UnknownPromptError(key)
            reply = self.default_reply
        else:
            reply = self.replies[key]
        if not reply.strip():
            raise EmptyCompletionError("scripted reply is empty")
        if self.transcript:
            self.transcript.record(history, reply)
        return reply


def write_replay_file(path: str | Path, entries: list[tuple[list[ChatMessage], str]]) -> None:
    lines = []
    for history, reply in entries:
        lines.append(
            json.dumps(
                {
                    "prompt_hash": prompt_hash(history),
                    "prompt_text": render_prompt_text(history),
                    "reply": reply,
                },
                ensure_ascii=False,
            )
        )
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
