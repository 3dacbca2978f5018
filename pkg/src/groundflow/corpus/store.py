"""Filesystem-backed report store.

Layout: one ``<accession_number>.txt`` file per report plus ``index.json``
holding the dedup index. Writes are atomic (tmp file + rename) and guarded
by a lock so concurrent downloaders can share a store.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from ..errors import IntegrityError
from .models import CorpusIndex, FilingRef, RawReport


class CorpusStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    # -- reports ------------------------------------------------------------

    def report_path(self, accession_number: str) -> Path:
        return self.root / f"{accession_number}.txt"

    def has_report(self, accession_number: str) -> bool:
        return self.report_path(accession_number).exists()

    def read_report(self, ref: FilingRef) -> RawReport:
        body = self.report_path(ref.accession_number).read_text(encoding="utf-8")
        return RawReport(ref=ref, body=body)

    def write_report(self, report: RawReport) -> None:
        path = self.report_path(report.ref.accession_number)
        with self._lock:
            if path.exists():
                existing = path.read_text(encoding="utf-8")
                if existing != report.body:
                    raise IntegrityError(
                        f"accession {report.ref.accession_number} already stored "
                        "with a different body"
                    )
                return
            self._atomic_write(path, report.body)

    def list_accessions(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.txt"))

    # -- index ----------------------------------------------------------------

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"

    def save_index(self, index: CorpusIndex) -> None:
        payload = json.dumps(index.to_json_obj(), indent=2, sort_keys=True) + "\n"
        with self._lock:
            self._atomic_write(self.index_path, payload)

    def load_index(self) -> CorpusIndex:
        obj = json.loads(self.index_path.read_text(encoding="utf-8"))
        return CorpusIndex.from_json_obj(obj)

    def _atomic_write(self, path: Path, content: str) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(content, encoding="utf-8")
        tmp.replace(path)
