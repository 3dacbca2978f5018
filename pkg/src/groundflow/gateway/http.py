"""Remote chat/embedding backends speaking a plain JSON POST protocol.

Request bodies are ``{"model", "messages", "temperature", "max_tokens"}``
for chat and ``{"model", "input"}`` for embeddings. The API key is read
from an environment variable so secrets never live in config files.
"""

from __future__ import annotations

import os
from typing import Any, Callable

from ..errors import ConfigError, EmptyCompletionError, GatewayTransportError
from ..tokens import EMBED_TOKEN_LIMIT, DEFAULT_COUNTER, TokenCounter
from .types import ChatMessage, ChatParams, EmbeddingVector, TranscriptLog

API_KEY_ENV_VAR = "GROUNDFLOW_API_KEY"

PostFn = Callable[[str, dict, dict], Any]


def _requests_post(url: str, payload: dict, headers: dict) -> Any:
    import requests

    try:
        resp = requests.post(url, json=payload, headers=headers, timeout=60)
    except requests.RequestException as exc:
        raise GatewayTransportError(str(exc)) from exc
    if resp.status_code != 200:
        raise GatewayTransportError(f"POST {url} returned {resp.status_code}")
    return resp.json()


class _HttpBase:
    def __init__(self, base_url: str, api_key_env: str = API_KEY_ENV_VAR, post: PostFn = _requests_post):
        if not base_url:
            raise ConfigError("remote gateway requires a base URL")
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self._post = post

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env, "")
        if not key:
            raise ConfigError(f"API key env var {self.api_key_env} is not set")
        return {"Authorization": f"Bearer {key}"}


class HttpChatGateway(_HttpBase):
    def __init__(self, *args, transcript: TranscriptLog | None = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.transcript = transcript

    def chat(self, history: list[ChatMessage], params: ChatParams) -> str:
        if not history:
            raise ValueError("chat history must be non-empty")
        payload = {
            "model": params.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in history],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        data = self._post(f"{self.base_url}/chat/completions", payload, self._headers())
        try:
            reply = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise EmptyCompletionError(f"malformed completion response: {exc}") from exc
        if not (reply or "").strip():
            raise EmptyCompletionError("backend returned an empty completion")
        if self.transcript:
            self.transcript.record(history, reply)
        return reply


class HttpEmbeddingGateway(_HttpBase):
    def __init__(
        self,
        *args,
        model_id: str = "text-embedding-ada-002",
        token_counter: TokenCounter = DEFAULT_COUNTER,
        token_limit: int = EMBED_TOKEN_LIMIT,
        **kwargs,
    ):
        super().__init__(*args, **kwargs)
        self.model_id = model_id
        self.token_counter = token_counter
        self.token_limit = token_limit

    def embed(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValueError("cannot embed empty text")
        clipped = self.token_counter.truncate(text, self.token_limit)
        payload = {"model": self.model_id, "input": clipped}
        data = self._post(f"{self.base_url}/embeddings", payload, self._headers())
        try:
            values = tuple(float(v) for v in data["data"][0]["embedding"])
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise EmptyCompletionError(f"malformed embedding response: {exc}") from exc
        return EmbeddingVector(values=values)
