"""Normalized edit-distance similarity used for all fuzzy name matching.

Scores live on a 0..100 scale where 100 means the two strings are equal
after normalization (case folding plus whitespace collapsing). Matching
thresholds elsewhere in the package default to 85 on this scale.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_THRESHOLD = 85.0


@dataclass(frozen=True)
class MatchScore:
    candidate: str
    score: float


def normalize(s: str) -> str:
    """Case-fold and collapse internal/surrounding whitespace."""
    return " ".join(s.split()).casefold()


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance (unit-cost insert/delete/substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    # two-row DP
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            cur.append(min(cur[-1] + 1, prev[j] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str) -> MatchScore:
    """Similarity of ``a`` and ``b`` as 100 * (1 - distance / max_len).

    Computed on normalized strings; symmetric; 100 exactly when the
    normalized strings are equal, 0 when one side is empty and the other
    is not.
    """
    na, nb = normalize(a), normalize(b)
    if na == nb:
        return MatchScore(candidate=b, score=100.0)
    longest = max(len(na), len(nb))
    if longest == 0:
        return MatchScore(candidate=b, score=100.0)
    dist = edit_distance(na, nb)
    return MatchScore(candidate=b, score=100.0 * (1.0 - dist / longest))


def best_match(
    query: str,
    candidates: list[str],
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[str | None, list[MatchScore]]:
    """Best-scoring candidate at or above ``threshold``, plus a ranked list.

    Ties on score break toward the lexicographically smaller candidate so
    results are deterministic. The ranked list holds the top three scores
    for error reporting.
    """
    scored = [similarity(query, c) for c in candidates]
    scored.sort(key=lambda m: (-m.score, m.candidate))
    top = scored[:3]
    if scored and scored[0].score >= threshold:
        return scored[0].candidate, top
    return None, top
