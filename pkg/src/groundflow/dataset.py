"""Three-tier QA dataset model and builders.

Tiers: EASY asks for one relation or one value of one fund;
INTERMEDIATE asks for a ratio of two values of one fund; HARD asks for a
sum across three funds or for the inverse lookup of a service company
across every report. Ground truth is derived straight from the parsed
report items (not through the workflow engine, which is checked against
these answers separately). Sampling is seeded and the seed rides along
in every item.
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from . import templates
from .dsl.interp import round_half_away
from .errors import DatasetError, LabelNotFoundError
from .ncen.api import FundBlock, NcenApis
from .ncen.parsing import FUND_NAME_LABEL

log = logging.getLogger(__name__)

TIER_ORDER = ("EASY", "INTERMEDIATE", "HARD")


class Tier(enum.Enum):
    EASY = "EASY"
    INTERMEDIATE = "INTERMEDIATE"
    HARD = "HARD"


class AnswerKind(enum.Enum):
    ENTITIES = "ENTITIES"
    NUMBER = "NUMBER"


@dataclass(frozen=True)
class Answer:
    kind: AnswerKind
    entities: tuple[str, ...] = ()
    value: float = 0.0
    precision: int = 0

    def __post_init__(self) -> None:
        if self.precision < 0:
            raise ValueError("precision must be >= 0")
        if self.kind is AnswerKind.ENTITIES:
            if len(set(self.entities)) != len(self.entities):
                raise ValueError("entity answers must be de-duplicated")

    def to_json_obj(self) -> dict:
        if self.kind is AnswerKind.ENTITIES:
            return {"kind": self.kind.value, "entities": list(self.entities)}
        return {"kind": self.kind.value, "value": self.value, "precision": self.precision}


@dataclass(frozen=True)
class QaItem:
    id: str
    tier: Tier
    question: str
    answer: Answer
    relations: tuple[str, ...]
    source_funds: tuple[str, ...]
    items_cited: tuple[str, ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.source_funds:
            raise ValueError("source_funds must be non-empty")

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "tier": self.tier.value,
            "question": self.question,
            "answer": self.answer.to_json_obj(),
            "relations": list(self.relations),
            "source_funds": list(self.source_funds),
            "items_cited": list(self.items_cited),
            "seed": self.seed,
        }


def format_number(value: float) -> str:
    """Shortest plain-decimal rendering (never scientific notation)."""
    text = repr(value)
    if "e" in text or "E" in text:
        text = f"{value:.12f}".rstrip("0")
        if text.endswith("."):
            text += "0"
    return text


def precision_of(formatted: str) -> int:
    if "." not in formatted:
        return 0
    return len(formatted.split(".", 1)[1])


def number_answer(value: float) -> Answer:
    formatted = format_number(value)
    return Answer(kind=AnswerKind.NUMBER, value=value, precision=precision_of(formatted))


def ratio_answer(raw: float) -> Answer:
    """Ratios are reported at four decimals below 1.0, two above."""
    ndigits = 4 if abs(raw) < 1.0 else 2
    return number_answer(round_half_away(raw, ndigits))


# --- builders -----------------------------------------------------------------


def _fund_block(apis: NcenApis, fund: str) -> FundBlock:
    return apis.fetch_block(apis.get_report(fund), fund)


def _indexed_funds(apis: NcenApis) -> list[str]:
    return sorted(apis.index.entries)


def _round_robin(pools: list[list], n: int, label: str) -> list:
    """Draw evenly across pools; raise with shortfall if they run dry."""
    picked: list = []
    pools = [list(p) for p in pools if p]
    while len(picked) < n and pools:
        for pool in list(pools):
            if len(picked) >= n:
                break
            picked.append(pool.pop(0))
            if not pool:
                pools.remove(pool)
    if len(picked) < n:
        raise DatasetError(
            f"cannot build {n} {label} items: short by {n - len(picked)}"
        )
    return picked


def build_easy(apis: NcenApis, n: int, seed: int = 0) -> list[QaItem]:
    """Single-relation entity questions plus single-value number questions.

    Entity questions keep only (fund, relation) pairs whose answer is a
    single entity name.
    """
    import random

    rng = random.Random(seed)
    entity_pools: dict[str, list] = {rel: [] for rel in templates.ENTITY_RELATIONS}
    value_pools: dict[str, list] = {lbl: [] for lbl in templates.VALUE_LABELS}
    for fund in _indexed_funds(apis):
        block = _fund_block(apis, fund)
        for relation in templates.ENTITY_RELATIONS:
            names = apis.extract_entity(block, relation)
            if len(names) == 1:
                entity_pools[relation].append((fund, relation, names[0]))
        for label in templates.VALUE_LABELS:
            try:
                value = apis.extract_value(block, label)
            except LabelNotFoundError:
                continue
            value_pools[label].append((fund, label, value))
    for pool in entity_pools.values():
        rng.shuffle(pool)
    for pool in value_pools.values():
        rng.shuffle(pool)

    picked = _round_robin(list(entity_pools.values()) + list(value_pools.values()), n, "EASY")
    items = []
    for i, entry in enumerate(picked):
        fund, relation_or_label, payload = entry
        if relation_or_label in templates.ENTITY_RELATIONS:
            question = templates.EASY_ENTITY_TEMPLATE.format(
                relation=relation_or_label, fund=fund
            )
            answer = Answer(kind=AnswerKind.ENTITIES, entities=(payload,))
            cited = templates.RELATION_ITEMS[relation_or_label]
        else:
            question = templates.EASY_VALUE_TEMPLATE.format(
                label=relation_or_label, fund=fund
            )
            answer = number_answer(payload)
            cited = templates.VALUE_ITEMS[relation_or_label]
        items.append(
            QaItem(
                id=f"easy-{i:04d}",
                tier=Tier.EASY,
                question=question,
                answer=answer,
                relations=(relation_or_label,),
                source_funds=(fund,),
                items_cited=(cited,),
                seed=seed,
            )
        )
    return items


def build_intermediate(apis: NcenApis, n: int, seed: int = 0) -> list[QaItem]:
    """Ratio questions: value over net assets, answered by division."""
    import random

    rng = random.Random(seed)
    pools: dict[str, list] = {lbl: [] for lbl in templates.VALUE_LABELS}
    for fund in _indexed_funds(apis):
        block = _fund_block(apis, fund)
        try:
            net_assets = apis.extract_value(block, templates.NET_ASSETS_LABEL)
        except LabelNotFoundError:
            continue
        if net_assets == 0.0:
            log.info("skipping %s: zero net assets", fund)
            continue
        for label in templates.VALUE_LABELS:
            try:
                value = apis.extract_value(block, label)
            except LabelNotFoundError:
                continue
            pools[label].append((fund, label, value / net_assets))
    for pool in pools.values():
        rng.shuffle(pool)

    picked = _round_robin(list(pools.values()), n, "INTERMEDIATE")
    items = []
    for i, (fund, label, raw) in enumerate(picked):
        question = templates.INTERMEDIATE_TEMPLATE.format(
            numerator=label, denominator=templates.NET_ASSETS_LABEL, fund=fund
        )
        items.append(
            QaItem(
                id=f"inter-{i:04d}",
                tier=Tier.INTERMEDIATE,
                question=question,
                answer=ratio_answer(raw),
                relations=(label, templates.NET_ASSETS_LABEL),
                source_funds=(fund,),
                items_cited=(
                    templates.VALUE_ITEMS[label],
                    templates.VALUE_ITEMS[templates.NET_ASSETS_LABEL],
                ),
                seed=seed,
            )
        )
    return items


def service_company_map(apis: NcenApis) -> dict[tuple[str, str], set[str]]:
    """(relation, company) -> funds using it, scanned over every report."""
    companies: dict[tuple[str, str], set[str]] = {}
    for block in apis.all_blocks():
        fund_names = apis.extract_entity(block, FUND_NAME_LABEL)
        if not fund_names:
            continue
        fund = fund_names[0]
        for relation in templates.ENTITY_RELATIONS:
            for name in apis.extract_entity(block, relation):
                companies.setdefault((relation, name), set()).add(fund)
    return companies


def build_hard(apis: NcenApis, n: int, seed: int = 0) -> list[QaItem]:
    """Three-fund aggregation sums and whole-corpus inverse lookups."""
    import random

    rng = random.Random(seed)
    inverse_pool = []
    for (relation, company), funds in sorted(
        service_company_map(apis).items(), key=lambda kv: (kv[0][0], kv[0][1])
    ):
        if not funds or '"' in company:
            continue
        inverse_pool.append((relation, company, tuple(sorted(funds))))
    rng.shuffle(inverse_pool)

    funds = _indexed_funds(apis)
    aggregate_pool = []
    want_aggregates = n  # oversample; round-robin trims
    attempts = 0
    seen: set[tuple] = set()
    while len(aggregate_pool) < want_aggregates and attempts < want_aggregates * 20:
        attempts += 1
        trio = tuple(rng.sample(funds, 3))
        label = templates.VALUE_LABELS[attempts % 2]
        if (trio, label) in seen:
            continue
        seen.add((trio, label))
        try:
            total = sum(
                apis.extract_value(_fund_block(apis, f), label) for f in trio
            )
        except LabelNotFoundError:
            continue
        aggregate_pool.append((label, trio, round_half_away(total, 2)))

    picked = _round_robin([inverse_pool, aggregate_pool], n, "HARD")
    items = []
    for i, entry in enumerate(picked):
        if len(entry) == 3 and isinstance(entry[2], tuple):
            relation, company, answer_funds = entry
            question = templates.inverse_question(relation, company)
            items.append(
                QaItem(
                    id=f"hard-{i:04d}",
                    tier=Tier.HARD,
                    question=question,
                    answer=Answer(kind=AnswerKind.ENTITIES, entities=answer_funds),
                    relations=(relation,),
                    source_funds=answer_funds,
                    items_cited=(templates.RELATION_ITEMS[relation],),
                    seed=seed,
                )
            )
        else:
            label, trio, total = entry
            question = templates.HARD_AGGREGATE_TEMPLATE.format(
                label=label, a=trio[0], b=trio[1], c=trio[2]
            )
            items.append(
                QaItem(
                    id=f"hard-{i:04d}",
                    tier=Tier.HARD,
                    question=question,
                    answer=number_answer(total),
                    relations=(label,),
                    source_funds=trio,
                    items_cited=(templates.VALUE_ITEMS[label],),
                    seed=seed,
                )
            )
    return items


def build_all(apis: NcenApis, per_tier: int, seed: int = 0) -> list[QaItem]:
    return (
        build_easy(apis, per_tier, seed)
        + build_intermediate(apis, per_tier, seed)
        + build_hard(apis, per_tier, seed)
    )


# --- persistence ----------------------------------------------------------------


def save(items: list[QaItem], path: str | Path) -> None:
    lines = [json.dumps(item.to_json_obj(), ensure_ascii=False) for item in items]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _item_from_obj(obj: dict) -> QaItem:
    answer_obj = obj["answer"]
    kind = AnswerKind(answer_obj["kind"])
    if kind is AnswerKind.ENTITIES:
        answer = Answer(kind=kind, entities=tuple(answer_obj["entities"]))
    else:
        value = float(answer_obj["value"])
        if not math.isfinite(value):
            raise ValueError("answer value must be finite")
        answer = Answer(kind=kind, value=value, precision=int(answer_obj["precision"]))
    return QaItem(
        id=obj["id"],
        tier=Tier(obj["tier"]),
        question=obj["question"],
        answer=answer,
        relations=tuple(obj["relations"]),
        source_funds=tuple(obj["source_funds"]),
        items_cited=tuple(obj.get("items_cited", [])),
        seed=int(obj.get("seed", 0)),
    )


def load(path: str | Path) -> list[QaItem]:
    items = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            items.append(_item_from_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise DatasetError(f"{path}: line {i}: {exc}") from exc
    return items
