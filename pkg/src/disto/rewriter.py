"""Dehn's algorithm for the closed surface presentation.

A subword f of w is simplifiable when it is a prefix of a Lambda word and
longer than 2g.  One step replaces the longest simplifiable subword (the
leftmost one on ties) by the inverse of its complementary word and frees
reduces the result.  Iterating decides the word problem.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentation import CLOSED, Presentation, Word, free_reduce, invert


@dataclass(frozen=True)
class SimplifiableMatch:
    start: int
    length: int
    relator: Word
    complementary: Word


def _longest_prefix_at(p: Presentation, w: Sequence[int], s: int) -> tuple[int, Word | None]:
    if s + 1 >= len(w):
        return (1 if s < len(w) else 0), None
    lam = p.lambda_word(w[s], w[s + 1])
    if lam is None:
        return 1, None
    k = 2
    n = len(lam)
    while k < n and s + k < len(w) and w[s + k] == lam[k]:
        k += 1
    return k, lam


def find_simplifiable(p: Presentation, w: Sequence[int]) -> list[SimplifiableMatch]:
    """All simplifiable subwords not contained in a longer one.

    Sorted by (length desc, start asc).
    """
    if p.kind != CLOSED:
        return []
    half = 2 * p.genus
    found = []
    reach = -1
    for s in range(len(w)):
        k, lam = _longest_prefix_at(p, w, s)
        if k > half and s + k > reach:
            found.append(SimplifiableMatch(s, k, lam, lam[k:]))
        if lam is not None:
            reach = max(reach, s + k)
    found.sort(key=lambda m: (-m.length, m.start))
    return found


def dehn_step(p: Presentation, w: Sequence[int]) -> Word | None:
    """One rewriting step, or None when w is Dehn-reduced."""
    matches = find_simplifiable(p, w)
    if not matches:
        return None
    m = matches[0]
    w = tuple(w)
    return free_reduce(w[: m.start] + invert(m.complementary) + w[m.start + m.length:])


def dehn_reduce(p: Presentation, w: Sequence[int]) -> tuple[Word, list[Word]]:
    """Iterate dehn_step to a fixed point; returns (result, intermediate words)."""
    cur = free_reduce(w)
    steps = []
    while True:
        nxt = dehn_step(p, cur)
        if nxt is None:
            return cur, steps
        assert len(nxt) < len(cur)
        steps.append(nxt)
        cur = nxt


def is_trivial(p: Presentation, w: Sequence[int]) -> bool:
    return len(dehn_reduce(p, w)[0]) == 0


def equal_elements(p: Presentation, u: Sequence[int], v: Sequence[int]) -> bool:
    return is_trivial(p, tuple(u) + invert(v))
