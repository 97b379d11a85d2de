"""Levenshtein distance and closest-match selection for identifier repair."""

from __future__ import annotations
from collections.abc import Sequence


def levenshtein(a: str, b: str) -> int:
    """Number of single-character insertions, deletions, and substitutions
    needed to turn `a` into `b`."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def closest_match(target: str, candidates: Sequence[str]) -> tuple[str, int]:
    """Candidate with minimal distance to `target`; first wins on ties."""
    if not candidates:
        raise ValueError("no candidates")
    best = candidates[0]
    best_d = levenshtein(target, best)
    for cand in candidates[1:]:
        d = levenshtein(target, cand)
        if d < best_d:
            best, best_d = cand, d
    return best, best_d
