"""Low-level parsing of N-CEN-style report text.

Report layout understood here:

* a header with ``ACCESSION NUMBER:`` and ``FILED:`` lines,
* one region per fund, opened by an ``Item C.1. Fund name: <NAME>`` line,
* XML-like entity records inside a region::

      <entity role="custodian" item="C.12">
        <name>U.S. BANK NATIONAL ASSOCIATION</name>
        <lei>549300ABCDEF12345678</lei>
        <state>MN</state>
        <country>US</country>
      </entity>

* numeric and text items as ``Item <code>. <label>: <value>`` lines.

Entity discovery also reports each region's fund-name item as a record
labeled ``fund name`` so a workflow can recover the fund a block belongs
to through the same extraction call it uses for service providers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ValueParseError

FUND_NAME_LABEL = "fund name"
FUND_NAME_ITEM = "C.1"

_FUND_LINE_RE = re.compile(r"^Item C\.1\.\s+Fund name:\s*(.+?)\s*$", re.MULTILINE)
_ITEM_LINE_RE = re.compile(
    r"^Item\s+([A-Z]\.\d+)\.\s+([^:<\n]+?):\s*(.+?)\s*$", re.MULTILINE
)
_ENTITY_RE = re.compile(r"<entity\b([^>]*)>(.*?)</entity>", re.DOTALL)
_ATTR_RE = re.compile(r'(\w+)\s*=\s*"([^"]*)"')
_CHILD_RE = re.compile(r"<(\w+)>\s*(.*?)\s*</\1>", re.DOTALL)
_NUMBER_RE = re.compile(r"^[-+]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?$")


@dataclass(frozen=True)
class Segment:
    fund_name: str
    start: int
    end: int


@dataclass(frozen=True)
class EntityRecord:
    label: str
    name: str
    attributes: dict[str, str] = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self) -> None:
        if not self.label or not self.name:
            raise ValueError("entity records need a non-empty label and name")


@dataclass(frozen=True)
class ValueItem:
    item_code: str
    label: str
    raw: str
    offset: int

    def as_number(self) -> float:
        token = self.raw.strip()
        if not _NUMBER_RE.match(token):
            raise ValueParseError(self.label, token)
        return float(token.replace(",", ""))


def segment_text(body: str) -> list[Segment]:
    """Non-overlapping per-fund regions in filing order.

    A region runs from its fund-name line to the next fund-name line (or
    the end of the document). A body without fund-name lines yields no
    segments.
    """
    matches = list(_FUND_LINE_RE.finditer(body))
    segments = []
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(body)
        segments.append(Segment(fund_name=m.group(1), start=m.start(), end=end))
    return segments


def parse_entities(text: str, base_offset: int = 0) -> list[EntityRecord]:
    """All entity records in document order, including the fund-name item."""
    records: list[tuple[int, EntityRecord]] = []
    for m in _FUND_LINE_RE.finditer(text):
        rec = EntityRecord(
            label=FUND_NAME_LABEL,
            name=m.group(1),
            attributes={"item": FUND_NAME_ITEM},
        )
        records.append((base_offset + m.start(), rec))
    for m in _ENTITY_RE.finditer(text):
        attrs = dict(_ATTR_RE.findall(m.group(1)))
        children = {tag: value for tag, value in _CHILD_RE.findall(m.group(2))}
        label = attrs.pop("role", "")
        name = children.pop("name", "")
        if not label or not name:
            continue
        merged = {**attrs, **children}
        records.append((base_offset + m.start(), EntityRecord(label=label, name=name, attributes=merged)))
    records.sort(key=lambda pair: pair[0])
    return [rec for _, rec in records]


def parse_value_items(text: str) -> list[ValueItem]:
    """All ``Item <code>. <label>: <value>`` lines in document order."""
    return [
        ValueItem(item_code=m.group(1), label=m.group(2).strip(), raw=m.group(3), offset=m.start())
        for m in _ITEM_LINE_RE.finditer(text)
    ]
