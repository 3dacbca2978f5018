from __future__ import annotations

import datetime as dt
import json

import pytest

from groundflow.corpus import (
    CorpusStore,
    DateWindow,
    DirectorySource,
    FilingRef,
    HttpSource,
    RawReport,
    SlidingWindowRateLimiter,
    SourceConfig,
    build_index,
    download_report,
    fetch_filings,
    ingest,
)
from groundflow.errors import (
    HttpStatusError,
    IntegrityError,
    RetryableSourceError,
    SourceParseError,
)
from groundflow.fixtures import corpus_source_dir


def fund_section(name: str, value: str = "10.0") -> str:
    return f"Item C.1. Fund name: {name}\nItem C.15. Gross commission: {value}\n"


def report_text(accession: str, filed: str, *funds: str) -> str:
    head = f"N-CEN ANNUAL REPORT\nACCESSION NUMBER: {accession}\nFILED: {filed}\n\n"
    return head + "\n".join(fund_section(f) for f in funds)


def make_report(accession: str, filed: str, *funds: str) -> RawReport:
    return RawReport(
        ref=FilingRef(accession, dt.date.fromisoformat(filed), f"mem://{accession}"),
        body=report_text(accession, filed, *funds),
    )


# --- rate limiter ------------------------------------------------------------


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self) -> float:
        return self.now

    def sleep(self, seconds: float) -> None:
        self.now += max(seconds, 1e-6)


def test_rate_limiter_sliding_window_property():
    clock = FakeClock()
    limiter = SlidingWindowRateLimiter(limit=10, window=1.0, clock=clock, sleeper=clock.sleep)
    stamps = [limiter.acquire() for _ in range(57)]
    for i, t in enumerate(stamps):
        in_window = [s for s in stamps if t - 1.0 < s <= t]
        assert len(in_window) <= 10, f"window ending at event {i} holds {len(in_window)}"


def test_rate_limiter_does_not_block_under_limit():
    clock = FakeClock()
    limiter = SlidingWindowRateLimiter(limit=3, window=1.0, clock=clock, sleeper=clock.sleep)
    for _ in range(3):
        limiter.acquire()
    assert clock.now == 0.0


# --- sources ----------------------------------------------------------------------


class FakeTransport:
    def __init__(self, pages: dict[str, bytes], failures: dict[str, int] | None = None):
        self.pages = pages
        self.failures = dict(failures or {})
        self.calls: list[str] = []

    def get(self, url: str, headers: dict[str, str]) -> tuple[int, bytes]:
        assert headers.get("User-Agent"), "every request must carry the contact header"
        self.calls.append(url)
        if self.failures.get(url, 0) > 0:
            self.failures[url] -= 1
            raise ConnectionError("connection reset")
        if url not in self.pages:
            return 404, b""
        return 200, self.pages[url]


def http_source(pages, failures=None, attempts=3):
    clock = FakeClock()
    cfg = SourceConfig(base_url="http://src.test", contact="test@example.com", attempts=attempts)
    limiter = SlidingWindowRateLimiter(limit=100, clock=clock, sleeper=clock.sleep)
    transport = FakeTransport(pages, failures)
    return HttpSource(cfg, transport=transport, limiter=limiter, sleeper=clock.sleep), transport


def index_page(entries) -> bytes:
    return json.dumps(entries).encode()


FILING_ENTRIES = [
    {"accession": "A-1", "filed": "2023-01-10", "url": "http://src.test/A-1.txt"},
    {"accession": "A-2", "filed": "2023-05-20", "url": "http://src.test/A-2.txt"},
    {"accession": "A-3", "filed": "2022-11-02", "url": "http://src.test/A-3.txt"},
]


def test_fetch_filings_sorted_newest_first():
    source, _ = http_source({"http://src.test/filings.json": index_page(FILING_ENTRIES)})
    refs = fetch_filings(source)
    assert [r.accession_number for r in refs] == ["A-2", "A-1", "A-3"]


def test_fetch_filings_empty_index():
    source, _ = http_source({"http://src.test/filings.json": index_page([])})
    assert fetch_filings(source) == []


def test_fetch_filings_disjoint_window():
    source, _ = http_source({"http://src.test/filings.json": index_page(FILING_ENTRIES)})
    window = DateWindow(start=dt.date(2024, 1, 1), end=dt.date(2024, 12, 31))
    assert fetch_filings(source, window) == []


def test_malformed_index_names_byte_offset():
    source, _ = http_source({"http://src.test/filings.json": b'[{"accession": }]'})
    with pytest.raises(SourceParseError) as exc:
        fetch_filings(source)
    assert exc.value.offset == 15
    assert "offset 15" in str(exc.value)


def test_download_is_cached(tmp_path):
    body = report_text("A-1", "2023-01-10", "FUND ONE")
    source, transport = http_source({"http://src.test/A-1.txt": body.encode()})
    store = CorpusStore(tmp_path / "store")
    ref = FilingRef("A-1", dt.date(2023, 1, 10), "http://src.test/A-1.txt")

    first = download_report(ref, source, store)
    network_calls = len(transport.calls)
    second = download_report(ref, source, store)
    assert len(transport.calls) == network_calls, "second call must be served from cache"
    assert first.body == second.body == body


def test_download_dead_url_retries_then_fails(tmp_path):
    source, transport = http_source({}, failures={"http://src.test/dead.txt": 99}, attempts=3)
    store = CorpusStore(tmp_path / "store")
    ref = FilingRef("D-1", dt.date(2023, 1, 1), "http://src.test/dead.txt")
    with pytest.raises(RetryableSourceError) as exc:
        download_report(ref, source, store)
    assert exc.value.attempts == 3
    assert len(transport.calls) == 3


def test_download_http_error_carries_status(tmp_path):
    source, _ = http_source({})
    ref = FilingRef("M-1", dt.date(2023, 1, 1), "http://src.test/missing.txt")
    with pytest.raises(HttpStatusError) as exc:
        download_report(ref, source, CorpusStore(tmp_path / "store"))
    assert exc.value.status == 404


# --- build_index --------------------------------------------------------------------


def test_build_index_one_report_two_funds():
    index = build_index([make_report("A-1", "2023-01-10", "FUND ONE", "FUND TWO")])
    assert index.fund_count == 2
    assert index.report_count == 1
    assert set(index.entries) == {"FUND ONE", "FUND TWO"}


def test_build_index_latest_filing_wins():
    old = make_report("A-1", "2021-03-01", "FUND F")
    new = make_report("A-2", "2023-03-01", "FUND F")
    index = build_index([old, new])
    assert index.entries["FUND F"].accession_number == "A-2"
    # order of input must not matter
    assert build_index([new, old]).entries["FUND F"].accession_number == "A-2"


def test_build_index_date_tie_breaks_by_greatest_accession():
    a = make_report("A-1", "2023-03-01", "FUND F")
    b = make_report("A-9", "2023-03-01", "FUND F")
    assert build_index([a, b]).entries["FUND F"].accession_number == "A-9"
    assert build_index([b, a]).entries["FUND F"].accession_number == "A-9"


def test_build_index_empty():
    index = build_index([])
    assert index.fund_count == 0 and index.report_count == 0


def test_build_index_same_accession_different_bodies_is_integrity_error():
    a = make_report("A-1", "2023-03-01", "FUND F")
    b = RawReport(ref=a.ref, body=a.body + "tampered\n")
    with pytest.raises(IntegrityError):
        build_index([a, b])


def test_fund_names_case_and_whitespace_normalized():
    report = make_report("A-1", "2023-01-10", "Fund  One")
    assert set(build_index([report]).entries) == {"FUND ONE"}


# --- ingestion over the bundled fixture source ------------------------------------------


def test_ingest_fixture_corpus(tmp_path, manifest):
    store = CorpusStore(tmp_path / "store")
    result = ingest(DirectorySource(corpus_source_dir()), store, workers=4)
    assert result.downloaded == manifest["report_count"]
    assert result.index.fund_count == manifest["fund_count"]
    assert store.index_path.exists()


def test_dedup_idempotence_serialized_byte_identical(tmp_path):
    source = DirectorySource(corpus_source_dir())
    refs = fetch_filings(source)
    store = CorpusStore(tmp_path / "store")
    reports = [download_report(r, source, store) for r in refs]
    first = json.dumps(build_index(reports).to_json_obj(), sort_keys=True)
    second = json.dumps(build_index(reports).to_json_obj(), sort_keys=True)
    assert first == second


def test_stale_duplicate_fund_resolves_to_latest(apis):
    # the 2021 filing also reports PRECIOUS METALS FUND; the index must not use it
    ref = apis.index.entries["PRECIOUS METALS FUND"]
    assert ref.accession_number == "0000897101-23-000215"
    assert ref.filing_date == dt.date(2023, 4, 12)
    # but the old filing stays reachable through its still-current fund
    legacy = apis.index.entries["LEGACY MONEY MARKET FUND"]
    assert legacy.accession_number == "0000897101-21-000180"


def test_index_json_schema(fixture_store):
    obj = json.loads(fixture_store.index_path.read_text())
    assert set(obj) == {"funds", "reports"}
    assert obj["reports"] == 11
    entry = obj["funds"]["PRECIOUS METALS FUND"]
    assert set(entry) == {"accession", "filed"}
    dt.date.fromisoformat(entry["filed"])


def test_store_rejects_conflicting_report_body(tmp_path):
    store = CorpusStore(tmp_path / "store")
    report = make_report("A-1", "2023-01-10", "FUND ONE")
    store.write_report(report)
    with pytest.raises(IntegrityError):
        store.write_report(RawReport(ref=report.ref, body=report.body + "x"))
