"""Filing discovery, cached download, and dedup index construction.

Duplicate funds across filings resolve to the latest filing date; equal
dates resolve to the lexicographically greatest accession number, which is
deterministic because accession numbers embed a filing sequence.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..errors import IntegrityError
from ..ncen.parsing import segment_text
from .models import CorpusIndex, FilingRef, RawReport, canonical_fund_name
from .sources import DateWindow, FilingSource
from .store import CorpusStore

log = logging.getLogger(__name__)


def fetch_filings(source: FilingSource, window: DateWindow | None = None) -> list[FilingRef]:
    """Candidate filings in the window, newest first."""
    return source.list_filings(window or DateWindow())


def download_report(ref: FilingRef, source: FilingSource, store: CorpusStore) -> RawReport:
    """Fetch one report, serving repeats from the local store."""
    if store.has_report(ref.accession_number):
        return store.read_report(ref)
    body = source.fetch_body(ref)
    if not body.strip():
        raise IntegrityError(f"empty body for {ref.accession_number}")
    report = RawReport(ref=ref, body=body)
    store.write_report(report)
    return report


def build_index(reports: list[RawReport]) -> CorpusIndex:
    """Fold reports into a one-ref-per-fund index."""
    bodies: dict[str, str] = {}
    index = CorpusIndex()
    for report in reports:
        acc = report.ref.accession_number
        if acc in bodies and bodies[acc] != report.body:
            raise IntegrityError(f"accession {acc} appears with two different bodies")
        bodies[acc] = report.body
        for segment in segment_text(report.body):
            key = canonical_fund_name(segment.fund_name)
            current = index.entries.get(key)
            if current is None or _newer(report.ref, current):
                index.entries[key] = report.ref
    return index


def _newer(candidate: FilingRef, incumbent: FilingRef) -> bool:
    return (candidate.filing_date, candidate.accession_number) > (
        incumbent.filing_date,
        incumbent.accession_number,
    )


@dataclass
class IngestResult:
    index: CorpusIndex
    downloaded: int


def ingest(
    source: FilingSource,
    store: CorpusStore,
    window: DateWindow | None = None,
    workers: int = 4,
) -> IngestResult:
    """Discover, download, index, and persist; the one-call ingestion path."""
    refs = fetch_filings(source, window)
    log.info("discovered %d filings", len(refs))
    if workers > 1 and len(refs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda r: download_report(r, source, store), refs))
    else:
        reports = [download_report(ref, source, store) for ref in refs]
    index = build_index(reports)
    store.save_index(index)
    return IngestResult(index=index, downloaded=len(reports))
