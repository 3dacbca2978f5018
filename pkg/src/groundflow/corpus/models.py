"""Core corpus records: filings, raw report bodies, and the dedup index."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field


def canonical_fund_name(name: str) -> str:
    """Upper-case, whitespace-collapsed form used as the index key."""
    return " ".join(name.split()).upper()


@dataclass(frozen=True)
class FilingRef:
    accession_number: str
    filing_date: dt.date
    source_url: str

    def __post_init__(self) -> None:
        if not self.accession_number:
            raise ValueError("accession_number must be non-empty")


@dataclass(frozen=True)
class RawReport:
    ref: FilingRef
    body: str

    def __post_init__(self) -> None:
        if not self.body:
            raise ValueError("report body must be non-empty")


@dataclass
class CorpusIndex:
    """Map of canonical fund name to the most recent filing containing it."""

    entries: dict[str, FilingRef] = field(default_factory=dict)

    @property
    def fund_count(self) -> int:
        return len(self.entries)

    @property
    def report_count(self) -> int:
        return len({ref.accession_number for ref in self.entries.values()})

    def accessions(self) -> list[str]:
        return sorted({ref.accession_number for ref in self.entries.values()})

    def to_json_obj(self) -> dict:
        funds = {
            name: {
                "accession": ref.accession_number,
                "filed": ref.filing_date.isoformat(),
            }
            for name, ref in sorted(self.entries.items())
        }
        return {"funds": funds, "reports": self.report_count}

    @classmethod
    def from_json_obj(cls, obj: dict, url_for: dict[str, str] | None = None) -> CorpusIndex:
        entries: dict[str, FilingRef] = {}
        for name, info in obj.get("funds", {}).items():
            accession = info["accession"]
            entries[name] = FilingRef(
                accession_number=accession,
                filing_date=dt.date.fromisoformat(info["filed"]),
                source_url=(url_for or {}).get(accession, ""),
            )
        return cls(entries=entries)
