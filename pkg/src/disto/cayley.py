"""Balls in the Cayley graph and the face classifications on the tiling.

Faces of the tiling are group elements; the face gamma(D0) is stored by its
shortlex-least geodesic word.  Balls are built breadth first.  Deciding
whether a new word names a face already seen needs a word problem oracle;
two are available:

``geometric`` (default)
    The closed surface group acts on the hyperbolic plane by the side
    pairings of a regular 4g-gon with angles pi/2g.  An element is keyed by
    the hyperboloid coordinates of the image of the polygon centre, rounded
    to unit cells.  Two distinct images sit at hyperbolic distance at least
    twice the inradius, hence at Euclidean distance > 4 on the hyperboloid,
    so a cell (probed with its neighbours near boundaries) holds at most one
    element.  This is independent of the rewriter.

``dehn``
    Words are bucketed by their images under several homomorphisms onto
    free groups, and collisions are settled with ``rewriter.is_trivial``.
"""
from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .presentation import CLOSED, FREE, Presentation, Word, free_reduce, invert
from .rewriter import is_trivial

DEFAULT_BUDGET = 5_000_000
BUDGET_ENV = "DISTO_BALL_BUDGET"


class BudgetExceeded(RuntimeError):
    pass


class OutOfBall(LookupError):
    pass


class GeodesicOverflow(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        value = int(raw)
        if value <= 0:
            raise ValueError(f"{BUDGET_ENV} must be positive")
        return value
    return DEFAULT_BUDGET


# -- the geometric representation -------------------------------------------

@lru_cache(maxsize=None)
def _mp_generators(g: int, dps: int) -> tuple:
    """SU(1,1) matrices of a1, A1, b1, B1, ... in letter order."""
    with mpmath.workdps(dps):
        n = 4 * g
        pi = mpmath.pi

        def rot(phi):
            return mpmath.matrix([[mpmath.expj(phi / 2), 0], [0, mpmath.expj(-phi / 2)]])

        half = mpmath.acosh(mpmath.cot(pi / n))  # inradius
        tr = mpmath.matrix([[mpmath.cosh(half), mpmath.sinh(half)], [mpmath.sinh(half), mpmath.cosh(half)]])
        # pairing of side j: half-turn-free map sending side j+2 onto side j
        side = [rot(2 * pi * j / n) * tr * rot(-2 * pi * j / n) * rot(pi - 4 * pi / n) for j in range(n)]
        gens = []
        for i in range(g):
            # with b_i the inverse pairing of side 4i+1 the commutator product is 1
            a, b = side[4 * i], side[4 * i + 1] ** -1
            gens += [a, a ** -1, b, b ** -1]
        return tuple(gens)


@lru_cache(maxsize=None)
def _float_generators(g: int) -> tuple:
    return tuple(np.array([[complex(m[i, j]) for j in range(2)] for i in range(2)]) for m in _mp_generators(g, 30))


def _hyperboloid(alpha, beta):
    t = abs(alpha) ** 2 + abs(beta) ** 2
    xy = 2 * alpha * beta
    return t, xy.real, xy.imag


_CELL_TOL = 1e-3
# float matrices are trusted while the hyperboloid height stays below this
_FLOAT_T_LIMIT = 1e10


def _cell_candidates(pt: Sequence[float]) -> Iterable[tuple[int, int, int]]:
    opts = []
    for c in pt:
        fl = math.floor(c)
        fr = c - fl
        o = [fl]
        if fr < _CELL_TOL:
            o.append(fl - 1)
        elif fr > 1 - _CELL_TOL:
            o.append(fl + 1)
        opts.append(o)
    return itertools.product(*opts)


def geometric_point(g: int, w: Sequence[int], dps: int = 50) -> tuple:
    """Hyperboloid image of the polygon centre under w, in high precision."""
    gens = _mp_generators(g, dps)
    with mpmath.workdps(dps):
        m = mpmath.eye(2)
        for x in w:
            m = m * gens[x]
        t, x_, y_ = _hyperboloid(m[0, 0], m[0, 1])
        return float(t), float(x_), float(y_)


def _point(g: int, w: Sequence[int]) -> tuple:
    # floats are exact enough while every partial product stays low on the
    # hyperboloid; otherwise fall back to high precision
    gens = _float_generators(g)
    m = np.eye(2, dtype=complex)
    for x in w:
        m = m @ gens[x]
        if abs(m[0, 0]) ** 2 > _FLOAT_T_LIMIT:
            return geometric_point(g, w, 30 + 2 * len(w))
    t, x_, y_ = _hyperboloid(m[0, 0], m[0, 1])
    return float(t), float(x_), float(y_)


def geometric_is_identity(g: int, w: Sequence[int]) -> bool:
    """Word problem through the hyperbolic representation alone."""
    dps = 30 + 2 * len(w)
    t, _, _ = geometric_point(g, w, dps)
    # the identity fixes the centre (t = 1); any other element moves it by
    # at least twice the inradius, so t >= cosh(2r) > 5
    return t < 2.0


# -- free-group homomorphism keys for the dehn backend -----------------------

def _free_images(g: int) -> list[dict[int, Word]]:
    maps = []
    for pa, pb in ((1, 0), (0, 1), (1, 1), (1, -1)):
        m = {}
        for i in range(g):
            a, b = 4 * i, 4 * i + 2
            m[a] = (2 * i,) * pa if pa > 0 else ()
            m[b] = (2 * i,) * abs(pb) if pb > 0 else ((2 * i + 1,) * abs(pb) if pb < 0 else ())
        maps.append(m)
    # a1 -> x, b1 -> y, a2 -> y, b2 -> x, remaining handles killed
    m = {}
    for i in range(g):
        m[4 * i] = ()
        m[4 * i + 2] = ()
    m[0], m[2], m[4], m[6] = (0,), (2,), (2,), (0,)
    maps.append(m)
    full = []
    for m in maps:
        d = {}
        for gen, img in m.items():
            d[gen] = img
            d[gen ^ 1] = invert(img)
        full.append(d)
    return full


# -- balls -------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    word: Word
    dist: int


@dataclass
class Ball:
    presentation: Presentation
    radius: int
    method: str
    words: list[Word]
    dist: list[int]
    nbr: list[list[int]]
    spheres: list[int]
    _index: dict = field(repr=False)
    _keys: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    # identification of arbitrary words

    def id_of(self, w: Sequence[int]) -> int:
        """Index of the face named by the word w; OutOfBall if it is farther than the radius."""
        w = free_reduce(w)
        p = self.presentation
        if p.kind == FREE:
            if w in self._index:
                return self._index[w]
            raise OutOfBall(p.format(w))
        if self.method == "geometric":
            g = p.genus
            t, x, y = _point(g, w)
            for key in _cell_candidates((t, x, y)):
                if key in self._keys:
                    return self._keys[key]
            raise OutOfBall(p.format(w))
        key = _dehn_key(self._maps, w)
        for fid in self._keys.get(key, ()):
            if is_trivial(p, self.words[fid] + invert(w)):
                return fid
        raise OutOfBall(p.format(w))

    def walk(self, w: Sequence[int], start: int = 0) -> int:
        """Follow neighbour links from ``start``; -1 once the path leaves the ball."""
        f = start
        for x in w:
            f = self.nbr[f][x]
            if f < 0:
                return -1
        return f

    def face(self, w: Sequence[int]) -> Face:
        fid = self.id_of(w)
        return Face(self.words[fid], self.dist[fid])

    def faces(self) -> list[Face]:
        return [Face(w, d) for w, d in zip(self.words, self.dist)]

    def sphere(self, r: int) -> range:
        lo = sum(self.spheres[:r])
        return range(lo, lo + self.spheres[r])

    @property
    def _maps(self):
        return _free_images(self.presentation.genus)


def _dehn_key(maps, w):
    return tuple(free_reduce(y for x in w for y in m[x]) for m in maps)


def enumerate_ball(p: Presentation, r: int, budget: int | None = None, method: str = "geometric") -> Ball:
    """Breadth-first ball of radius r with shortlex canonical forms."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    if p.kind not in (CLOSED, FREE):
        raise ValueError("balls are built for closed surfaces and free groups")
    if method not in ("geometric", "dehn"):
        raise ValueError(f"unknown equality method {method!r}")
    budget = default_budget() if budget is None else budget
    if budget <= 0:
        raise ValueError("budget must be positive")
    n_let = p.n_letters
    words: list[Word] = [()]
    dist = [0]
    nbr = [[-1] * n_let]
    index: dict = {(): 0}
    keys: dict = {}
    spheres = [1]

    def new_face(w: Word, d: int) -> int:
        if len(words) >= budget:
            raise BudgetExceeded(f"ball of radius {r} exceeds the budget of {budget} faces")
        words.append(w)
        dist.append(d)
        nbr.append([-1] * n_let)
        return len(words) - 1

    def link(a: int, x: int, b: int) -> None:
        nbr[a][x] = b
        nbr[b][x ^ 1] = a

    frontier = [0]
    if p.kind == FREE:
        for level in range(r):
            nxt = []
            for f in frontier:
                w = words[f]
                for x in range(n_let):
                    if w and w[-1] == x ^ 1:
                        continue
                    c = new_face(w + (x,), level + 1)
                    index[w + (x,)] = c
                    link(f, x, c)
                    nxt.append(c)
            spheres.append(len(nxt))
            frontier = nxt
        return Ball(p, r, "free", words, dist, nbr, spheres, index, keys)

    g = p.genus
    if method == "geometric":
        gens = np.array(_float_generators(g))
        mats = np.eye(2, dtype=complex)[None, :, :]
        keys[(1, 0, 0)] = 0
        for level in range(r):
            cand = np.einsum("nij,xjk->nxik", mats, gens)
            t = np.abs(cand[:, :, 0, 0]) ** 2 + np.abs(cand[:, :, 0, 1]) ** 2
            if t.size and t.max() > _FLOAT_T_LIMIT:
                raise BudgetExceeded("radius beyond the floating point range of the geometric oracle")
            xy = 2 * cand[:, :, 0, 0] * cand[:, :, 0, 1]
            pts = np.stack([t, xy.real, xy.imag], axis=-1)
            nxt = []
            nxt_rows = []
            for a, f in enumerate(frontier):
                fw = words[f]
                for x in range(n_let):
                    if nbr[f][x] >= 0:
                        continue
                    pt = pts[a, x]
                    hit = -1
                    for key in _cell_candidates(pt):
                        hit = keys.get(key, -1)
                        if hit >= 0:
                            break
                    if hit < 0:
                        hit = new_face(fw + (x,), level + 1)
                        keys[tuple(int(math.floor(c)) for c in pt)] = hit
                        nxt.append(hit)
                        nxt_rows.append((a, x))
                    link(f, x, hit)
            spheres.append(len(nxt))
            frontier = nxt
            if nxt_rows:
                ia, ix = zip(*nxt_rows)
                mats = cand[list(ia), list(ix)]
            else:
                mats = mats[:0]
    else:
        maps = _free_images(g)
        images = {0: tuple(() for _ in maps)}
        keys[images[0]] = [0]
        for level in range(r):
            nxt = []
            for f in frontier:
                fw = words[f]
                img = images[f]
                for x in range(n_let):
                    if nbr[f][x] >= 0:
                        continue
                    w = fw + (x,)
                    key = tuple(free_reduce(im + m[x]) for im, m in zip(img, maps))
                    hit = -1
                    for c in keys.get(key, ()):
                        if is_trivial(p, words[c] + invert(w)):
                            hit = c
                            break
                    if hit < 0:
                        hit = new_face(w, level + 1)
                        keys.setdefault(key, []).append(hit)
                        images[hit] = key
                        nxt.append(hit)
                    link(f, x, hit)
            spheres.append(len(nxt))
            frontier = nxt
    for i, w in enumerate(words):
        index[w] = i
    return Ball(p, r, method, words, dist, nbr, spheres, index, keys)


# -- metric ------------------------------------------------------------------

def distance(ball: Ball, u: Sequence[int], v: Sequence[int]) -> int:
    """d(u(D0), v(D0)) = length of u^-1 v."""
    return ball.dist[ball.id_of(invert(u) + tuple(v))]


def diam_discrete(ball: Ball, faces: Sequence[Sequence[int]]) -> int:
    faces = [tuple(f) for f in faces]
    if not faces:
        raise ValueError("diameter of an empty face set")
    best = 0
    for i in range(len(faces)):
        for j in range(i + 1, len(faces)):
            best = max(best, distance(ball, faces[i], faces[j]))
    return best


def eloignement(ball: Ball, base: Sequence[int], faces: Sequence[Sequence[int]]) -> int:
    if not faces:
        raise ValueError("eloignement of an empty face set")
    return max(distance(ball, base, f) for f in faces)


# -- classification ----------------------------------------------------------

def down_neighbors(ball: Ball, fid: int) -> list[tuple[int, int]]:
    """(letter y, face) with face = f.y one step closer to D0."""
    d = ball.dist[fid]
    return [(y, c) for y, c in enumerate(ball.nbr[fid]) if c >= 0 and ball.dist[c] == d - 1]


def up_neighbors(ball: Ball, fid: int) -> list[tuple[int, int]]:
    d = ball.dist[fid]
    if d >= ball.radius:
        raise BudgetExceeded(f"face at distance {d} has neighbours outside the radius-{ball.radius} ball")
    return [(y, c) for y, c in enumerate(ball.nbr[fid]) if ball.dist[c] == d + 1]


def _fid(ball: Ball, f) -> int:
    return f if isinstance(f, int) else ball.id_of(f.word if isinstance(f, Face) else f)


def is_exceptional(ball: Ball, f) -> bool:
    fid = _fid(ball, f)
    if fid == 0:
        raise ValueError("exceptionality is only defined for faces other than D0")
    return len(down_neighbors(ball, fid)) >= 2


def face_type(ball: Ball, f, k: int, l: int) -> bool:
    """Recursive definition: every neighbour but one is of type (k-1, l)."""
    fid = _fid(ball, f)
    if not 0 <= k <= l:
        raise ValueError("need 0 <= k <= l")
    if ball.dist[fid] != l - k:
        raise ValueError(f"face at distance {ball.dist[fid]}, expected {l - k}")
    if fid == 0:
        raise ValueError("types are defined for faces other than D0")
    return _type_rec(ball, fid, k, l, {})


def _type_rec(ball: Ball, fid: int, k: int, l: int, memo: dict) -> bool:
    key = (fid, k)
    if key in memo:
        return memo[key]
    if len(down_neighbors(ball, fid)) != 1:
        res = False
    elif k == 0:
        res = True
    else:
        res = all(_type_rec(ball, c, k - 1, l, memo) for _, c in up_neighbors(ball, fid))
    memo[key] = res
    return res


def face_type_by_extension(ball: Ball, f, k: int, l: int) -> bool:
    """Extension criterion: no reduced extension of length <= k hits an exceptional face."""
    fid = _fid(ball, f)
    if not 0 <= k <= l or ball.dist[fid] != l - k or fid == 0:
        raise ValueError("bad (face, k, l)")
    last = ball.words[fid][-1]
    stack = [(fid, last, 0)]
    while stack:
        c, prev, depth = stack.pop()
        if len(down_neighbors(ball, c)) >= 2:
            return False
        if depth == k:
            continue
        if ball.dist[c] >= ball.radius:
            raise BudgetExceeded("extension leaves the ball")
        for x in range(ball.presentation.n_letters):
            if x != prev ^ 1:
                stack.append((ball.nbr[c][x], x, depth + 1))
    return True


def geodesics_to(ball: Ball, f, cap: int = 10_000) -> list[Word]:
    """All geodesic words from D0 to f, in lexicographic order."""
    fid = _fid(ball, f)
    memo: dict[int, list[Word]] = {0: [()]}

    def rec(c: int) -> list[Word]:
        if c in memo:
            return memo[c]
        out = []
        for y, p in down_neighbors(ball, c):
            for w in rec(p):
                out.append(w + (y ^ 1,))
                if len(out) > cap:
                    raise GeodesicOverflow(f"more than {cap} geodesics")
        memo[c] = sorted(out)
        return memo[c]

    return rec(fid)


@dataclass(frozen=True)
class VertexRing:
    base: Word
    relator: Word
    ring: tuple[int, ...]


def vertex_rings(ball: Ball, f=0) -> list[VertexRing]:
    fid = _fid(ball, f)
    rings = []
    for lam in ball.presentation.relators:
        cur, ring = fid, []
        for x in lam:
            cur = ball.nbr[cur][x]
            if cur < 0:
                raise BudgetExceeded("vertex ring leaves the ball")
            ring.append(cur)
        rings.append(VertexRing(ball.words[fid], lam, tuple(ring)))
    return rings


def check_parity(ball: Ball) -> list:
    bad = []
    for f, row in enumerate(ball.nbr):
        for c in row:
            if c >= 0 and (ball.dist[c] - ball.dist[f]) % 2 == 0:
                bad.append((ball.words[f], ball.words[c]))
    return bad


def check_adjacence(ball: Ball, faces: Iterable[int] = (0,)) -> list:
    """Every ring has 4g distinct faces, closes up, and pairs with its inverse word."""
    p = ball.presentation
    n = 4 * p.genus
    bad = []
    for fid in faces:
        rings = vertex_rings(ball, fid)
        sets: dict = {}
        for vr in rings:
            if len(set(vr.ring)) != n or vr.ring[-1] != fid:
                bad.append(("ring", p.format(vr.base), p.format(vr.relator)))
            for a, b in zip((fid,) + vr.ring, vr.ring):
                if b not in ball.nbr[a]:
                    bad.append(("adjacent", p.format(vr.relator)))
            sets.setdefault(frozenset(vr.ring), []).append(vr.relator)
        for members in sets.values():
            if len(members) != 2 or members[0] != invert(members[1]):
                bad.append(("pairing", [p.format(m) for m in members]))
    return bad


def distinct_vertex_rings(ball: Ball, f=0) -> int:
    return len({frozenset(vr.ring) for vr in vertex_rings(ball, f)})


def exceptional_faces(ball: Ball) -> list[int]:
    return [f for f in range(1, len(ball)) if len(down_neighbors(ball, f)) >= 2]


def _property1(p: Presentation, gam: Word) -> bool:
    n = 2 * p.genus
    return len(gam) >= n and p.in_lambda_subword(gam[-n:])


def _property2(p: Presentation, gam: Word) -> bool:
    n = 2 * p.genus
    if len(gam) < 2 * n - 1:
        return False
    tail = gam[-(2 * n - 1):]
    l1, l2 = tail[:n], tail[n:]
    return p.in_lambda_subword(l1) and p.in_lambda_subword(l2) and not p.in_lambda_subword((l1[-1], l2[0]))


def check_geodexc(ball: Ball, cap: int = 10_000) -> tuple[list, dict]:
    """Shape of geodesics to exceptional faces; returns (violations, stats)."""
    p = ball.presentation
    n = 2 * p.genus
    bad = []
    stats = {"exceptional": 0, "geodesics": 0, "property2_only": 0, "incoming": {}}
    for fid in exceptional_faces(ball):
        stats["exceptional"] += 1
        k = len(down_neighbors(ball, fid))
        stats["incoming"][k] = stats["incoming"].get(k, 0) + 1
        geos = geodesics_to(ball, fid, cap)
        stats["geodesics"] += len(geos)
        p1 = [gam for gam in geos if _property1(p, gam)]
        for gam in geos:
            if gam not in p1:
                if _property2(p, gam):
                    stats["property2_only"] += 1
                else:
                    bad.append(("dichotomy", p.format(gam)))
        if not p1:
            bad.append(("no-property1", p.format(ball.words[fid])))
            continue
        tail = p1[0][-n:]
        lam = p.lambda_word(tail[0], tail[1])
        allowed = {lam[:n], invert(lam[n:])}
        for gam in p1:
            if gam[-n:] not in allowed:
                bad.append(("pairing", p.format(ball.words[fid]), p.format(gam)))
    return bad, stats


def ring_faces(ball: Ball, fid: int, gam: Word) -> tuple[list[int], list[int]]:
    """D_i^1 and D_i^2 for 0 <= i <= 2g, from a property-1 geodesic gam."""
    p = ball.presentation
    n = 2 * p.genus
    head, tail = gam[:-n], gam[-n:]
    lam = p.lambda_word(tail[0], tail[1])
    base = ball.walk(head)
    d1 = [ball.walk(lam[: n - i], base) for i in range(n + 1)]
    d2 = [ball.walk(invert(lam[n + i:]), base) for i in range(n + 1)]
    return d1, d2


def check_faceexc(ball: Ball) -> tuple[list, int]:
    """Off-ring neighbours of D_i^j are of type (i-1, d(D0, D))."""
    p = ball.presentation
    n = 2 * p.genus
    bad = []
    checked = 0
    memo: dict = {}
    for fid in exceptional_faces(ball):
        m = ball.dist[fid]
        gam = next(gm for gm in geodesics_to(ball, fid) if _property1(p, gm))
        d1, d2 = ring_faces(ball, fid, gam)
        if d1[0] != fid or d2[0] != fid or d1[n] != d2[n]:
            bad.append(("ring-ends", p.format(ball.words[fid])))
            continue
        shared = set(d1) | set(d2)
        if len(shared) != 2 * n:
            bad.append(("ring-size", p.format(ball.words[fid]), len(shared)))
        for ring in (d1, d2):
            for i in range(1, n - 1):
                for c in ball.nbr[ring[i]]:
                    if c in (ring[i - 1], ring[i + 1]):
                        continue
                    checked += 1
                    if ball.dist[c] != m - i + 1 or not _type_rec(ball, c, i - 1, m, memo.setdefault(m, {})):
                        bad.append(("type", p.format(ball.words[fid]), i, p.format(ball.words[c])))
    return bad, checked


def _geodesic_prefixes(ball: Ball, n: int) -> list[set]:
    """For each face, the set of length-min(n, d) prefixes of its geodesics."""
    pref: list[set] = [set() for _ in range(len(ball))]
    pref[0] = {()}
    for fid in range(1, len(ball)):
        d = ball.dist[fid]
        acc = set()
        for y, c in down_neighbors(ball, fid):
            if d <= n:
                acc |= {w + (y ^ 1,) for w in pref[c]}
            else:
                acc |= pref[c]
        pref[fid] = acc
    return pref


def check_geodexc2(ball: Ball) -> tuple[list, int]:
    """D0 exceptional with respect to D1 iff geodesics to D1 start differently."""
    p = ball.presentation
    n = 2 * p.genus
    bad = []
    hits = 0
    pref = _geodesic_prefixes(ball, n)
    for fid in range(1, len(ball)):
        w = ball.words[fid]
        firsts = {gam[0] for gam in pref[fid]}
        # rebase at D1 = w(D0): D0 becomes the face w^-1, whose geodesics are
        # the inverses of those to w
        inv_id = ball.walk(invert(w))
        rebased = len(down_neighbors(ball, inv_id)) >= 2
        if rebased != (len(firsts) >= 2):
            bad.append(("iff", p.format(w)))
        if len(firsts) < 2:
            continue
        hits += 1
        lead = sorted(gam for gam in pref[fid] if len(gam) == n and p.in_lambda_subword(gam))
        if not lead:
            bad.append(("no-lambda-prefix", p.format(w)))
            continue
        lam = p.lambda_word(lead[0][0], lead[0][1])
        vertex = {ball.walk(lam[:i]) for i in range(4 * p.genus + 1)}
        if any(ball.nbr[0][a] not in vertex for a in firsts):
            bad.append(("shared-vertex", p.format(w)))
    return bad, hits


def check_type_definitions(ball: Ball, max_l: int | None = None) -> tuple[list, int]:
    """Recursive and extension definitions of (k, l) types agree."""
    max_l = ball.radius if max_l is None else max_l
    bad = []
    count = 0
    memo: dict = {}
    for fid in range(1, len(ball)):
        d = ball.dist[fid]
        for l in range(d, max_l + 1):
            k = l - d
            a = _type_rec(ball, fid, k, l, memo.setdefault(l, {}))
            b = face_type_by_extension(ball, fid, k, l)
            count += 1
            if a != b:
                bad.append((ball.presentation.format(ball.words[fid]), k, l))
    return bad, count


def check_el_diam(ball: Ball, samples: int = 200, size: int = 6, seed: int = 0) -> list:
    """el <= diam <= 2 el on random face sets containing the base face D0."""
    rng = random.Random(seed)
    # pairwise quotients of faces within radius/2 stay inside the ball
    pool = [f for f in range(1, len(ball)) if ball.dist[f] <= ball.radius // 2]
    bad = []
    for _ in range(samples):
        picks = [ball.words[f] for f in rng.sample(pool, min(size, len(pool)))]
        faces = [()] + picks
        el = eloignement(ball, (), faces)
        d = diam_discrete(ball, faces)
        if not el <= d <= 2 * el:
            bad.append(([ball.presentation.format(w) for w in picks], el, d))
    return bad
