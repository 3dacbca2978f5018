"""Context-retrieval question answering, the comparison method.

Every fund block is embedded once; a question is answered by embedding
it, taking the top-k blocks by cosine similarity, and prepending them to
the question in a fixed prompt frame. Block text is truncated to the
embedding token limit before indexing, and the assembled prompt is held
under the completion token limit by cutting block tails in rank order and
dropping the lowest-ranked blocks first. The question itself is never
truncated.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetError, TokenBudgetError
from .gateway.types import ChatGateway, ChatMessage, ChatParams, EmbeddingGateway, EmbeddingVector, cosine
from .ncen.api import FundBlock, NcenApis
from .tokens import DEFAULT_COUNTER, EMBED_TOKEN_LIMIT, PROMPT_TOKEN_LIMIT, TokenCounter

log = logging.getLogger(__name__)

PROMPT_FRAME = (
    "Use the following fund report context to answer the question.\n"
    "\n"
    "Context:\n"
    "{context}\n"
    "\n"
    "Question: {question}\n"
    "Answer:"
)

DEFAULT_K_SINGLE_FUND = 1
DEFAULT_K_MULTI_FUND = 3


@dataclass(frozen=True)
class IndexEntry:
    block_id: str
    fund_name: str
    vector: EmbeddingVector


@dataclass
class EmbeddingIndex:
    entries: list[IndexEntry]

    @property
    def dimension(self) -> int:
        return self.entries[0].vector.dimension if self.entries else 0

    def __len__(self) -> int:
        return len(self.entries)


def block_id(block: FundBlock) -> str:
    return f"{block.source.accession_number}:{block.start:08d}"


class RetrievalBaseline:
    def __init__(
        self,
        apis: NcenApis,
        embedder: EmbeddingGateway,
        token_counter: TokenCounter = DEFAULT_COUNTER,
        prompt_token_limit: int = PROMPT_TOKEN_LIMIT,
        embed_token_limit: int = EMBED_TOKEN_LIMIT,
    ):
        self.apis = apis
        self.embedder = embedder
        self.token_counter = token_counter
        self.prompt_token_limit = prompt_token_limit
        self.embed_token_limit = embed_token_limit

    # -- index ----------------------------------------------------------------

    def _blocks_by_id(self) -> dict[str, FundBlock]:
        return {block_id(b): b for b in self.apis.all_blocks()}

    def build_index(self) -> EmbeddingIndex:
        entries = []
        for block in self.apis.all_blocks():
            clipped = self.token_counter.truncate(block.text, self.embed_token_limit)
            entries.append(
                IndexEntry(
                    block_id=block_id(block),
                    fund_name=block.fund_name,
                    vector=self.embedder.embed(clipped),
                )
            )
        return EmbeddingIndex(entries=entries)

    # -- retrieval -----------------------------------------------------------------

    def retrieve(self, index: EmbeddingIndex, question: str, k: int = DEFAULT_K_SINGLE_FUND) -> list[FundBlock]:
        if k < 1:
            raise ValueError("k must be at least 1")
        if k > len(index):
            log.warning("k=%d exceeds index size %d; returning all blocks", k, len(index))
            k = len(index)
        query = self.embedder.embed(
            self.token_counter.truncate(question, self.embed_token_limit)
        )
        scored = sorted(
            ((cosine(entry.vector, query), entry) for entry in index.entries),
            key=lambda pair: (-pair[0], pair[1].block_id),
        )
        lookup = self._blocks_by_id()
        return [lookup[entry.block_id] for _, entry in scored[:k]]

    # -- answering ---------------------------------------------------------------------

    def build_prompt(self, question: str, blocks: list[FundBlock]) -> str:
        overhead = self.token_counter.count(PROMPT_FRAME.format(context="", question=question))
        budget = self.prompt_token_limit - overhead
        if budget < 0:
            raise TokenBudgetError(
                f"question alone exceeds the {self.prompt_token_limit}-token prompt budget"
            )
        kept: list[str] = []
        for block in blocks:
            if budget <= 0:
                break
            clipped = self.token_counter.truncate(block.text, budget)
            if not clipped:
                break
            kept.append(clipped)
            budget -= self.token_counter.count(clipped)
        return PROMPT_FRAME.format(context="\n".join(kept), question=question)

    def answer(
        self,
        gateway: ChatGateway,
        question: str,
        blocks: list[FundBlock],
        params: ChatParams | None = None,
    ) -> str:
        prompt = self.build_prompt(question, blocks)
        return gateway.chat([ChatMessage(role="user", content=prompt)], params or ChatParams())

    def ask(
        self,
        gateway: ChatGateway,
        index: EmbeddingIndex,
        question: str,
        k: int = DEFAULT_K_SINGLE_FUND,
        params: ChatParams | None = None,
    ) -> str:
        return self.answer(gateway, question, self.retrieve(index, question, k), params)


# -- persistence -------------------------------------------------------------------


def save_index(index: EmbeddingIndex, path: str | Path) -> None:
    lines = [json.dumps({"dimension": index.dimension, "count": len(index)})]
    for entry in index.entries:
        lines.append(
            json.dumps(
                {
                    "block_id": entry.block_id,
                    "fund": entry.fund_name,
                    "vector": list(entry.vector.values),
                }
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_index(path: str | Path) -> EmbeddingIndex:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DatasetError(f"{path}: empty index file")
    header = json.loads(lines[0])
    entries = []
    for line in lines[1:]:
        if not line.strip():
            continue
        obj = json.loads(line)
        entries.append(
            IndexEntry(
                block_id=obj["block_id"],
                fund_name=obj["fund"],
                vector=EmbeddingVector(values=tuple(float(v) for v in obj["vector"])),
            )
        )
    if len(entries) != header.get("count"):
        raise DatasetError(
            f"{path}: header says {header.get('count')} entries, found {len(entries)}"
        )
    if entries and header.get("dimension") != entries[0].vector.dimension:
        raise DatasetError(f"{path}: header dimension mismatch")
    return EmbeddingIndex(entries=entries)
