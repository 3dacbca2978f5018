"""Accuracy scoring and the method-by-tier comparison table.

An entity answer counts only when every ground-truth name appears in the
prediction (case- and whitespace-insensitively). A numeric answer counts
when any number in the prediction equals the ground truth after rounding
both to the ground truth's precision. Method failures score as incorrect
instead of aborting the run.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .dataset import AnswerKind, QaItem, TIER_ORDER
from .dsl.interp import round_half_away
from .errors import BenchError
from .fuzz import normalize

_NUMBER_TOKEN_RE = re.compile(r"[-+]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?|[-+]?\.\d+")


def match_entities(predicted: str, gold: list[str] | tuple[str, ...]) -> bool:
    """True only when every gold name occurs in the normalized prediction."""
    if not gold:
        raise ValueError("gold entity list must be non-empty")
    haystack = normalize(predicted)
    return all(normalize(name) in haystack for name in gold)


def match_number(predicted: str, gold_value: float, precision: int) -> bool:
    """True when any numeric token rounds to the gold value."""
    if precision < 0:
        raise ValueError("precision must be >= 0")
    target = round_half_away(gold_value, precision)
    for token in _NUMBER_TOKEN_RE.findall(predicted):
        try:
            value = float(token.replace(",", ""))
        except ValueError:
            continue
        if round_half_away(value, precision) == target:
            return True
    return False


def score_item(item: QaItem, predicted: str) -> bool:
    if item.answer.kind is AnswerKind.ENTITIES:
        return match_entities(predicted, item.answer.entities)
    return match_number(predicted, item.answer.value, item.answer.precision)


@dataclass(frozen=True)
class MethodUnderTest:
    name: str
    answer_fn: Callable[[str], str]
    config: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ItemResult:
    id: str
    predicted: str
    verdict: bool
    error: str | None = None

    def to_json_obj(self) -> dict:
        obj = {"id": self.id, "predicted": self.predicted, "verdict": self.verdict}
        if self.error:
            obj["error"] = self.error
        return obj


@dataclass(frozen=True)
class BenchResult:
    method: str
    tier: str
    correct: int
    total: int
    per_item: tuple[ItemResult, ...]

    @property
    def accuracy(self) -> float:
        return self.correct / self.total

    def to_json_obj(self) -> dict:
        return {
            "method": self.method,
            "tier": self.tier,
            "correct": self.correct,
            "total": self.total,
            "accuracy": self.accuracy,
            "per_item": [r.to_json_obj() for r in self.per_item],
        }


def run_bench(
    method: MethodUnderTest,
    qa_items: list[QaItem],
    tier_filter: str | None = None,
    workers: int = 1,
) -> BenchResult:
    items = [i for i in qa_items if tier_filter is None or i.tier.value == tier_filter]
    if not items:
        raise BenchError(
            f"no items to score for tier {tier_filter!r}: accuracy is undefined"
        )

    def score_one(item: QaItem) -> ItemResult:
        try:
            predicted = method.answer_fn(item.question)
        except Exception as exc:  # method errors count against the method
            return ItemResult(id=item.id, predicted="", verdict=False, error=str(exc))
        return ItemResult(id=item.id, predicted=predicted, verdict=score_item(item, predicted))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(score_one, items))
    else:
        results = [score_one(item) for item in items]
    correct = sum(1 for r in results if r.verdict)
    return BenchResult(
        method=method.name,
        tier=tier_filter or "ALL",
        correct=correct,
        total=len(items),
        per_item=tuple(results),
    )


def _tier_sort_key(tier: str) -> tuple[int, str]:
    try:
        return (TIER_ORDER.index(tier), tier)
    except ValueError:
        return (len(TIER_ORDER), tier)


def render_table(results: list[BenchResult]) -> str:
    """Plain-text table: one row per tier, one column per method."""
    methods: list[str] = []
    for r in results:
        if r.method not in methods:
            methods.append(r.method)
    tiers = sorted({r.tier for r in results}, key=_tier_sort_key)
    cells = {(r.tier, r.method): f"{100.0 * r.accuracy:.1f}%" for r in results}
    header = ["Tier"] + methods
    rows = [[tier] + [cells.get((tier, m), "-") for m in methods] for tier in tiers]
    widths = [
        max(len(header[c]), *(len(row[c]) for row in rows)) if rows else len(header[c])
        for c in range(len(header))
    ]
    lines = [
        "  ".join(header[c].ljust(widths[c]) for c in range(len(header))).rstrip(),
        "  ".join("-" * widths[c] for c in range(len(header))).rstrip(),
    ]
    for row in rows:
        lines.append(
            "  ".join(row[c].rjust(widths[c]) if c else row[c].ljust(widths[c]) for c in range(len(row))).rstrip()
        )
    return "\n".join(lines)


def save_results(results: list[BenchResult], path) -> None:
    payload = {"version": 1, "results": [r.to_json_obj() for r in results]}
    from pathlib import Path

    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
