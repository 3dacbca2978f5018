from .ingest import IngestResult, build_index, download_report, fetch_filings, ingest
from .models import CorpusIndex, FilingRef, RawReport, canonical_fund_name
from .ratelimit import DEFAULT_RATE_LIMIT, SlidingWindowRateLimiter
from .sources import (
    CONTACT_ENV_VAR,
    DateWindow,
    DirectorySource,
    HttpSource,
    SourceConfig,
    open_source,
)
from .store import CorpusStore

__all__ = [
    "CONTACT_ENV_VAR",
    "CorpusIndex",
    "CorpusStore",
    "DEFAULT_RATE_LIMIT",
    "DateWindow",
    "DirectorySource",
    "FilingRef",
    "HttpSource",
    "IngestResult",
    "RawReport",
    "SlidingWindowRateLimiter",
    "SourceConfig",
    "build_index",
    "canonical_fund_name",
    "download_report",
    "fetch_filings",
    "ingest",
    "open_source",
]
