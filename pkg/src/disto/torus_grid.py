"""Footprints of compact sets on the square tiling of the plane.

A footprint records which closed unit squares [i, i+1] x [j, j+1] a set
meets and which of the lines x = k/2 (resp. y = k/2) it crosses.  Lines are
stored as the integer k, so ``k = 2i + half`` encodes x = i + half/2.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .symbolic import Symbolic, sym

Square = tuple[int, int]


@dataclass(frozen=True)
class GridFootprint:
    faces: frozenset
    vlines: frozenset  # doubled x coordinates of crossed vertical lines
    hlines: frozenset

    def __post_init__(self):
        if not self.faces:
            raise ValueError("a footprint meets at least one square")
        xs = [i for i, _ in self.faces]
        ys = [j for _, j in self.faces]
        for k in self.vlines:
            if not 2 * min(xs) <= k <= 2 * (max(xs) + 1):
                raise ValueError(f"vertical line x={k / 2} outside the face span")
        for k in self.hlines:
            if not 2 * min(ys) <= k <= 2 * (max(ys) + 1):
                raise ValueError(f"horizontal line y={k / 2} outside the face span")

    @classmethod
    def make(cls, faces: Iterable[Square], vlines: Iterable = (), hlines: Iterable = ()) -> "GridFootprint":
        return cls(frozenset(map(tuple, faces)), frozenset(_doubled(v) for v in vlines), frozenset(_doubled(h) for h in hlines))


def _doubled(v) -> int:
    q = Fraction(v) * 2
    if q.denominator != 1:
        raise ValueError(f"line coordinate {v} is not a multiple of 1/2")
    return int(q)


def grid_distance(u: Square, v: Square) -> int:
    return abs(u[0] - v[0]) + abs(u[1] - v[1])


def length(f: GridFootprint) -> int:
    return len(f.vlines)


def height(f: GridFootprint) -> int:
    return len(f.hlines)


def diam_discrete(f: GridFootprint) -> int:
    fs = list(f.faces)
    # L1 diameter: max over the two diagonal directions
    s = [i + j for i, j in fs]
    d = [i - j for i, j in fs]
    return max(max(s) - min(s), max(d) - min(d))


def is_four_connected(faces: Iterable[Square]) -> bool:
    faces = set(faces)
    if not faces:
        return False
    start = next(iter(faces))
    seen = {start}
    todo = [start]
    while todo:
        i, j = todo.pop()
        for n in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
            if n in faces and n not in seen:
                seen.add(n)
                todo.append(n)
    return len(seen) == len(faces)


Box = tuple[Fraction, Fraction, Fraction, Fraction]


def footprint_of_boxes(boxes: Sequence[Box]) -> GridFootprint:
    """Footprint of a union of closed axis-parallel boxes (x0, x1, y0, y1)."""
    faces = set()
    vl, hl = set(), set()
    for x0, x1, y0, y1 in boxes:
        x0, x1, y0, y1 = map(Fraction, (x0, x1, y0, y1))
        if x0 > x1 or y0 > y1:
            raise ValueError("degenerate box")
        for i in range(math.ceil(x0) - 1, math.floor(x1) + 1):
            for j in range(math.ceil(y0) - 1, math.floor(y1) + 1):
                faces.add((i, j))
        vl.update(range(math.ceil(2 * x0), math.floor(2 * x1) + 1))
        hl.update(range(math.ceil(2 * y0), math.floor(2 * y1) + 1))
    return GridFootprint(frozenset(faces), frozenset(vl), frozenset(hl))


D0_BOX: Box = (Fraction(0), Fraction(1), Fraction(0), Fraction(1))


def d0_footprint() -> GridFootprint:
    return footprint_of_boxes([D0_BOX])


def path_oracle_distance(u: Square, v: Square, size: int = 5) -> int:
    """Least number of squares met by a path between the interiors, minus one.

    Exhaustive over paths inside a size x size block.  A path moves through an
    edge (meeting one new square) or through a corner point, which meets all
    four squares around that corner.
    """
    inside = lambda s: 0 <= s[0] < size and 0 <= s[1] < size
    start = (1, u, frozenset([u]))
    heap = [start]
    best: dict = {}
    while heap:
        cost, cur, met = heapq.heappop(heap)
        if cur == v:
            return cost - 1
        if best.get((cur, met), math.inf) < cost:
            continue
        i, j = cur
        moves = []
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            moves.append(((i + di, j + dj), [(i + di, j + dj)]))
        for di, dj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            moves.append(((i + di, j + dj), [(i + di, j), (i, j + dj), (i + di, j + dj)]))
        for nxt, touched in moves:
            if not all(inside(s) for s in touched):
                continue
            nmet = met.union(touched)
            ncost = len(nmet)
            if ncost < best.get((nxt, nmet), math.inf):
                best[(nxt, nmet)] = ncost
                heapq.heappush(heap, (ncost, nxt, nmet))
    raise ValueError("target unreachable")


@dataclass(frozen=True)
class Plan:
    steps: tuple[str, ...]
    bound: Symbolic

    @property
    def reductions(self) -> int:
        return len(self.steps) - 1


def reduction_plan(f: GridFootprint) -> Plan:
    """Length reductions, then height reductions, then the final small step."""
    steps = ["reduce-length"] * max(length(f) - 3, 0) + ["reduce-height"] * max(height(f) - 3, 0)
    steps.append("intore")
    bound = sym("C") * (4 * diam_discrete(f)) + sym("C'")
    return Plan(tuple(steps), bound)


def plan_steps(length_: int, height_: int) -> int:
    return max(length_ - 3, 0) + max(height_ - 3, 0)
