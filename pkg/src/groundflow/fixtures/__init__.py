"""Paths into the bundled fixture data shipped with the package."""

from __future__ import annotations

import json
from pathlib import Path

_ROOT = Path(__file__).resolve().parent


def corpus_source_dir() -> Path:
    """Directory of fixture reports, usable as an ingestion source."""
    return _ROOT / "corpus"


def registry_path() -> Path:
    return _ROOT / "registry.json"


def lecture_snapshot_path() -> Path:
    return _ROOT / "lecture_full.txt"


def baseline_prompt_path() -> Path:
    return _ROOT / "baseline_prompt.txt"


def replay_path(name: str) -> Path:
    return _ROOT / "replays" / f"{name}.jsonl"


def load_manifest() -> dict:
    return json.loads((_ROOT / "manifest.json").read_text(encoding="utf-8"))
