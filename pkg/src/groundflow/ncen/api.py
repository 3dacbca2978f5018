"""The six grounded fund-report APIs.

These are the only functions workflow code may call: three retrieval
entry points (get_report, get_all_reports, fetch_block), one partition
function (segment_report), and two extraction functions (extract_entity,
extract_value). All of them are read-only over an ingested corpus and
safe for concurrent callers; parse results are memoized once per report
at first touch.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..corpus.models import CorpusIndex, FilingRef
from ..corpus.store import CorpusStore
from ..errors import LabelNotFoundError, NoMatchError
from ..fuzz import DEFAULT_THRESHOLD, MatchScore, best_match, similarity
from .parsing import EntityRecord, ValueItem, parse_entities, parse_value_items, segment_text


@dataclass(frozen=True)
class Report:
    ref: FilingRef
    body: str
    fund_names: tuple[str, ...]


@dataclass(frozen=True)
class FundBlock:
    fund_name: str
    text: str
    source: FilingRef
    start: int = field(default=0, compare=False)

    @property
    def block_key(self) -> tuple[str, int]:
        return (self.source.accession_number, self.start)


class NcenApis:
    """API registry facade bound to one loaded corpus."""

    def __init__(
        self,
        store: CorpusStore,
        index: CorpusIndex | None = None,
        threshold: float = DEFAULT_THRESHOLD,
    ):
        self.store = store
        self.index = index if index is not None else store.load_index()
        self.threshold = threshold
        self._warmup_lock = threading.Lock()
        self._reports: dict[str, Report] = {}
        self._blocks: dict[str, tuple[FundBlock, ...]] = {}
        self._entities: dict[tuple[str, int], tuple[EntityRecord, ...]] = {}
        self._values: dict[tuple[str, int], tuple[ValueItem, ...]] = {}

    # -- retrieval -------------------------------------------------------------

    def get_report(self, fund_name: str) -> Report:
        """Report containing the fund whose name best matches ``fund_name``."""
        names = sorted(self.index.entries)
        winner, top = best_match(fund_name, names, self.threshold)
        if winner is None:
            raise NoMatchError(fund_name, [(m.candidate, m.score) for m in top])
        return self._load(self.index.entries[winner])

    def get_all_reports(self) -> list[Report]:
        """Every distinct indexed filing, ascending accession number."""
        refs = {ref.accession_number: ref for ref in self.index.entries.values()}
        return [self._load(refs[acc]) for acc in sorted(refs)]

    def fetch_block(self, report: Report, fund_name: str) -> FundBlock:
        """The fund block in ``report`` whose name best matches ``fund_name``."""
        blocks = self._segmented(report)
        winner, top = best_match(fund_name, [b.fund_name for b in blocks], self.threshold)
        if winner is None:
            raise NoMatchError(fund_name, [(m.candidate, m.score) for m in top])
        for block in blocks:
            if block.fund_name == winner:
                return block
        raise NoMatchError(fund_name, [(m.candidate, m.score) for m in top])

    # -- partition ---------------------------------------------------------------

    def segment_report(self, report: Report) -> list[FundBlock]:
        return list(self._segmented(report))

    # -- extract -----------------------------------------------------------------

    def extract_entity(self, block: FundBlock, entity_label: str) -> list[str]:
        """Names of every entity whose role best matches ``entity_label``.

        An unmatched label yields an empty list rather than an error: the
        absence of, say, a collateral manager is ordinary report content.
        """
        records = self._entity_records(block)
        labels = sorted({r.label for r in records})
        winner, _ = best_match(entity_label, labels, self.threshold)
        if winner is None:
            return []
        return [r.name for r in records if r.label == winner]

    def extract_value(self, block: FundBlock, value_label: str) -> float:
        """First numeric item whose label best matches ``value_label``."""
        items = self._value_items(block)
        labels = sorted({i.label for i in items})
        winner, top = best_match(value_label, labels, self.threshold)
        if winner is None:
            raise LabelNotFoundError(
                f"no value labeled like {value_label!r}; closest: "
                + ", ".join(f"{m.candidate!r} ({m.score:.1f})" for m in top)
            )
        for item in items:
            if item.label == winner:
                return item.as_number()
        raise LabelNotFoundError(value_label)

    # -- shared plumbing -------------------------------------------------------------

    def similarity(self, a: str, b: str) -> MatchScore:
        return similarity(a, b)

    def registry_bindings(self) -> dict[str, object]:
        """Callable map handed to the workflow interpreter."""
        return {
            "get_report": self.get_report,
            "get_all_reports": self.get_all_reports,
            "fetch_block": self.fetch_block,
            "segment_report": self.segment_report,
            "extract_entity": self.extract_entity,
            "extract_value": self.extract_value,
        }

    def all_blocks(self) -> list[FundBlock]:
        """Every block of every indexed report, report order then offset."""
        blocks: list[FundBlock] = []
        for report in self.get_all_reports():
            blocks.extend(self._segmented(report))
        return blocks

    # -- caches ---------------------------------------------------------------------

    def _load(self, ref: FilingRef) -> Report:
        cached = self._reports.get(ref.accession_number)
        if cached is not None:
            return cached
        with self._warmup_lock:
            cached = self._reports.get(ref.accession_number)
            if cached is not None:
                return cached
            raw = self.store.read_report(ref)
            segments = segment_text(raw.body)
            report = Report(
                ref=ref,
                body=raw.body,
                fund_names=tuple(s.fund_name for s in segments),
            )
            self._reports[ref.accession_number] = report
            self._blocks[ref.accession_number] = tuple(
                FundBlock(
                    fund_name=s.fund_name,
                    text=raw.body[s.start : s.end],
                    source=ref,
                    start=s.start,
                )
                for s in segments
            )
            return report

    def _segmented(self, report: Report) -> tuple[FundBlock, ...]:
        cached = self._blocks.get(report.ref.accession_number)
        if cached is not None:
            return cached
        self._load(report.ref)
        return self._blocks[report.ref.accession_number]

    def _entity_records(self, block: FundBlock) -> tuple[EntityRecord, ...]:
        key = block.block_key
        cached = self._entities.get(key)
        if cached is None:
            cached = tuple(parse_entities(block.text, base_offset=block.start))
            with self._warmup_lock:
                self._entities[key] = cached
        return cached

    def _value_items(self, block: FundBlock) -> tuple[ValueItem, ...]:
        key = block.block_key
        cached = self._values.get(key)
        if cached is None:
            cached = tuple(parse_value_items(block.text))
            with self._warmup_lock:
                self._values[key] = cached
        return cached
