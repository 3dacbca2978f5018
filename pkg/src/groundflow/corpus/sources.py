"""Filing sources: an EDGAR-style HTTP endpoint or a local directory.

The HTTP source expects ``<base_url>/filings.json`` to be a JSON array of
``{"accession": ..., "filed": "YYYY-MM-DD", "url": ...}`` objects. Every
request carries the configured contact string as its User-Agent, which the
SEC requires of automated clients. The directory source treats each
``*.txt`` file as a report whose header lines declare its own accession
number and filing date, so a folder of reports is self-describing.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol

from ..errors import (
    ConfigError,
    HttpStatusError,
    IntegrityError,
    RetryableSourceError,
    SourceParseError,
)
from .models import FilingRef
from .ratelimit import DEFAULT_RATE_LIMIT, SlidingWindowRateLimiter

CONTACT_ENV_VAR = "GROUNDFLOW_CONTACT"

_ACCESSION_RE = re.compile(r"^ACCESSION NUMBER:\s*(\S+)\s*$", re.MULTILINE)
_FILED_RE = re.compile(r"^FILED:\s*(\d{4}-\d{2}-\d{2})\s*$", re.MULTILINE)


@dataclass
class SourceConfig:
    base_url: str = ""
    contact: str = field(
        default_factory=lambda: os.environ.get(CONTACT_ENV_VAR, "")
    )
    rate_limit: int = DEFAULT_RATE_LIMIT
    attempts: int = 3
    backoff: float = 0.5

    def require_contact(self) -> str:
        if not self.contact:
            raise ConfigError(
                f"a contact identifier is required for HTTP sources; set it in "
                f"the config or via ${CONTACT_ENV_VAR}"
            )
        return self.contact


@dataclass(frozen=True)
class DateWindow:
    start: dt.date | None = None
    end: dt.date | None = None

    def contains(self, day: dt.date) -> bool:
        if self.start and day < self.start:
            return False
        if self.end and day > self.end:
            return False
        return True


class Transport(Protocol):
    """Minimal HTTP GET abstraction so tests can count and fake requests."""

    def get(self, url: str, headers: dict[str, str]) -> tuple[int, bytes]: ...


class RequestsTransport:
    def __init__(self, timeout: float = 30.0):
        import requests

        self._session = requests.Session()
        self._timeout = timeout

    def get(self, url: str, headers: dict[str, str]) -> tuple[int, bytes]:
        import requests

        try:
            resp = self._session.get(url, headers=headers, timeout=self._timeout)
        except requests.RequestException as exc:
            raise ConnectionError(str(exc)) from exc
        return resp.status_code, resp.content


class FilingSource(Protocol):
    def list_filings(self, window: DateWindow) -> list[FilingRef]: ...

    def fetch_body(self, ref: FilingRef) -> str: ...


class HttpSource:
    def __init__(
        self,
        config: SourceConfig,
        transport: Transport | None = None,
        limiter: SlidingWindowRateLimiter | None = None,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        config.require_contact()
        self.config = config
        self.transport = transport or RequestsTransport()
        self.limiter = limiter or SlidingWindowRateLimiter(limit=config.rate_limit)
        self._sleep = sleeper

    @property
    def _headers(self) -> dict[str, str]:
        return {"User-Agent": self.config.contact}

    def _get(self, url: str) -> bytes:
        last_error: Exception | None = None
        for attempt in range(1, self.config.attempts + 1):
            self.limiter.acquire()
            try:
                status, body = self.transport.get(url, self._headers)
            except ConnectionError as exc:
                last_error = exc
                if attempt < self.config.attempts:
                    self._sleep(self.config.backoff * attempt)
                continue
            if status >= 500:
                last_error = HttpStatusError(url, status)
                if attempt < self.config.attempts:
                    self._sleep(self.config.backoff * attempt)
                continue
            if status != 200:
                raise HttpStatusError(url, status)
            return body
        raise RetryableSourceError(str(last_error), attempts=self.config.attempts)

    def list_filings(self, window: DateWindow) -> list[FilingRef]:
        url = self.config.base_url.rstrip("/") + "/filings.json"
        raw = self._get(url)
        try:
            entries = json.loads(raw.decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise SourceParseError(f"malformed filing index: {exc.msg}", offset=exc.pos) from exc
        if not isinstance(entries, list):
            raise SourceParseError("filing index is not a JSON array", offset=0)
        refs = []
        for entry in entries:
            try:
                ref = FilingRef(
                    accession_number=entry["accession"],
                    filing_date=dt.date.fromisoformat(entry["filed"]),
                    source_url=entry["url"],
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise SourceParseError(f"bad filing entry: {exc}", offset=0) from exc
            if window.contains(ref.filing_date):
                refs.append(ref)
        refs.sort(key=lambda r: (r.filing_date, r.accession_number), reverse=True)
        return refs

    def fetch_body(self, ref: FilingRef) -> str:
        body = self._get(ref.source_url)
        text = body.decode("utf-8")
        if not text.strip():
            raise IntegrityError(f"empty body for {ref.accession_number}")
        return text


class DirectorySource:
    """Reads self-describing report files from a local folder."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise ConfigError(f"source directory does not exist: {self.root}")

    def list_filings(self, window: DateWindow) -> list[FilingRef]:
        refs = []
        for path in sorted(self.root.glob("*.txt")):
            ref = self._ref_from_file(path)
            if window.contains(ref.filing_date):
                refs.append(ref)
        refs.sort(key=lambda r: (r.filing_date, r.accession_number), reverse=True)
        return refs

    def fetch_body(self, ref: FilingRef) -> str:
        return Path(ref.source_url).read_text(encoding="utf-8")

    def _ref_from_file(self, path: Path) -> FilingRef:
        head = path.read_text(encoding="utf-8")
        acc = _ACCESSION_RE.search(head)
        filed = _FILED_RE.search(head)
        if not acc or not filed:
            missing = "ACCESSION NUMBER" if not acc else "FILED"
            offset = 0 if not acc else len(head[: head.find("\n")])
            raise SourceParseError(f"{path.name}: missing {missing} header", offset=offset)
        return FilingRef(
            accession_number=acc.group(1),
            filing_date=dt.date.fromisoformat(filed.group(1)),
            source_url=str(path),
        )


def open_source(
    location: str,
    config: SourceConfig,
    transport: Transport | None = None,
) -> FilingSource:
    if location.startswith(("http://", "https://")):
        cfg = SourceConfig(
            base_url=location,
            contact=config.contact,
            rate_limit=config.rate_limit,
            attempts=config.attempts,
            backoff=config.backoff,
        )
        return HttpSource(cfg, transport=transport)
    return DirectorySource(location)
