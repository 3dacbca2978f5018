"""Reference workflows: the hand-written program each QA item expects.

These are the anchor for the whole harness. A dataset item's golden
workflow must execute to exactly the stored ground truth, and the
scripted benchmark backend replays these programs to establish that a
perfect generator scores 100%.
"""

from __future__ import annotations

from . import templates
from .dataset import AnswerKind, QaItem, Tier
from .errors import DatasetError
from .ncen.parsing import FUND_NAME_LABEL


def _quoted(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_golden(item: QaItem) -> str:
    if item.tier is Tier.EASY:
        fund = item.source_funds[0]
        relation = item.relations[0]
        extract = (
            "extract_entity"
            if item.answer.kind is AnswerKind.ENTITIES
            else "extract_value"
        )
        return "\n".join(
            [
                f"report = get_report({_quoted(fund)})",
                f"block = fetch_block(report, {_quoted(fund)})",
                f"answer = {extract}(block, {_quoted(relation)})",
            ]
        )
    if item.tier is Tier.INTERMEDIATE:
        fund = item.source_funds[0]
        numerator, denominator = item.relations
        return "\n".join(
            [
                f"report = get_report({_quoted(fund)})",
                f"block = fetch_block(report, {_quoted(fund)})",
                f"numerator = extract_value(block, {_quoted(numerator)})",
                f"denominator = extract_value(block, {_quoted(denominator)})",
                "answer = numerator / denominator",
            ]
        )
    if item.tier is Tier.HARD:
        if item.answer.kind is AnswerKind.NUMBER:
            label = item.relations[0]
            funds = ", ".join(_quoted(f) for f in item.source_funds)
            return "\n".join(
                [
                    f"funds = [{funds}]",
                    "total = 0",
                    "for f in funds {",
                    "    report = get_report(f)",
                    "    block = fetch_block(report, f)",
                    f"    total = total + extract_value(block, {_quoted(label)})",
                    "}",
                    "answer = total",
                ]
            )
        slots = templates.parse_inverse_question(item.question)
        if slots is None:
            raise DatasetError(f"cannot recover company from question: {item.question!r}")
        return "\n".join(
            [
                "answer = []",
                "reports = get_all_reports()",
                "for r in reports {",
                "    blocks = segment_report(r)",
                "    for b in blocks {",
                f"        names = extract_entity(b, {_quoted(slots.relation)})",
                "        for n in names {",
                f"            if n == {_quoted(slots.company)} {{",
                f"                fund = extract_entity(b, {_quoted(FUND_NAME_LABEL)})",
                "                answer = append(answer, fund[0])",
                "            }",
                "        }",
                "    }",
                "}",
                "answer = unique(answer)",
            ]
        )
    raise DatasetError(f"no golden workflow for tier {item.tier}")
