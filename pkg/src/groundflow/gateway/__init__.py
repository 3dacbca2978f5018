from .http import API_KEY_ENV_VAR, HttpChatGateway, HttpEmbeddingGateway
from .local import LocalEmbeddingBackend
from .scripted import ScriptedChatBackend, prompt_hash, write_replay_file
from .types import (
    ChatGateway,
    ChatMessage,
    ChatParams,
    EmbeddingGateway,
    EmbeddingVector,
    TranscriptLog,
    cosine,
)

__all__ = [
    "API_KEY_ENV_VAR",
    "ChatGateway",
    "ChatMessage",
    "ChatParams",
    "EmbeddingGateway",
    "EmbeddingVector",
    "HttpChatGateway",
    "HttpEmbeddingGateway",
    "LocalEmbeddingBackend",
    "ScriptedChatBackend",
    "TranscriptLog",
    "cosine",
    "prompt_hash",
    "write_replay_file",
]
