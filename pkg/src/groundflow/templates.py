"""Fixed question templates and their slot parsers.

Scoring is exact, so question wording is frozen here rather than
paraphrased per item. The five entity relations map to the report items
that answer them; the two value labels map to the numeric items.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

ENTITY_RELATIONS = (
    "custodian",
    "investment adviser",
    "collateral manager",
    "administrator",
    "pricing service",
)

RELATION_ITEMS = {
    "custodian": "C.12",
    "investment adviser": "C.11",
    "collateral manager": "C.6",
    "administrator": "C.14",
    "pricing service": "D.12",
}

VALUE_LABELS = ("gross commission", "total purchase sale")

VALUE_ITEMS = {
    "gross commission": "C.15",
    "total purchase sale": "C.16",
    "fund net assets": "C.17",
}

NET_ASSETS_LABEL = "fund net assets"

EASY_ENTITY_TEMPLATE = "Who is the {relation} for the {fund}?"
EASY_VALUE_TEMPLATE = "What was the {label} for the {fund}?"
INTERMEDIATE_TEMPLATE = (
    "What is the ratio of the {numerator} against {denominator} for the {fund}?"
)
HARD_AGGREGATE_TEMPLATE = "What is the {label} aggregated over funds {a}, {b}, and {c}?"
HARD_INVERSE_ADVISER_TEMPLATE = (
    "What funds does the investment adviser company {company} manage?"
)
HARD_INVERSE_SERVICE_TEMPLATE = "What funds use {company} as their {relation}?"

_INVERSE_ADVISER_RE = re.compile(
    r"^What funds does the investment adviser company (?P<company>.+) manage\?$"
)
_INVERSE_SERVICE_RE = re.compile(
    r"^What funds use (?P<company>.+) as their (?P<relation>.+)\?$"
)


@dataclass(frozen=True)
class InverseSlots:
    relation: str
    company: str


def inverse_question(relation: str, company: str) -> str:
    if relation == "investment adviser":
        return HARD_INVERSE_ADVISER_TEMPLATE.format(company=company)
    return HARD_INVERSE_SERVICE_TEMPLATE.format(company=company, relation=relation)


def parse_inverse_question(question: str) -> InverseSlots | None:
    m = _INVERSE_ADVISER_RE.match(question)
    if m:
        return InverseSlots(relation="investment adviser", company=m.group("company"))
    m = _INVERSE_SERVICE_RE.match(question)
    if m:
        return InverseSlots(relation=m.group("relation"), company=m.group("company"))
    return None
