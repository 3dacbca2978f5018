"""Local deterministic embedding backend.

Hashed bag-of-words (unigrams plus word bigrams, sublinear counts) into a
fixed 1024-dimensional space with L2 normalization: cheap,
dependency-free, and stable across runs, which is what retrieval tests
need. Bigrams give multi-word names enough weight that a query naming a
fund ranks that fund's block above its siblings; square-root term
weighting keeps long blocks from drowning in their own filler. Inputs are
truncated to the embedding token limit before hashing, mirroring the
hosted-model contract.
"""

from __future__ import annotations

import hashlib
import math
import re
from collections import Counter

from ..tokens import EMBED_TOKEN_LIMIT, DEFAULT_COUNTER, TokenCounter
from .types import EmbeddingVector

_WORD_RE = re.compile(r"[a-z0-9]+")


class LocalEmbeddingBackend:
    def __init__(
        self,
        dimension: int = 1024,
        token_counter: TokenCounter = DEFAULT_COUNTER,
        token_limit: int = EMBED_TOKEN_LIMIT,
    ):
        self.dimension = dimension
        self.token_counter = token_counter
        self.token_limit = token_limit

    def _bucket(self, term: str) -> int:
        digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dimension

    def embed(self, text: str) -> EmbeddingVector:
        if not text:
            raise ValueError("cannot embed empty text")
        clipped = self.token_counter.truncate(text, self.token_limit)
        words = _WORD_RE.findall(clipped.lower())
        terms = Counter(words)
        terms.update(f"{first} {second}" for first, second in zip(words, words[1:]))
        counts = [0.0] * self.dimension
        for term, n in terms.items():
            counts[self._bucket(term)] += math.sqrt(n)
        norm = math.sqrt(sum(c * c for c in counts))
        if norm > 0:
            counts = [c / norm for c in counts]
        return EmbeddingVector(values=tuple(counts))
