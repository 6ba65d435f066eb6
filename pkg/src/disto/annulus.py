"""Orbit model of the annulus pushing map and its delay schedule.

Everything is exact: values are Fractions so floors and integrality tests
are decided, never approximated.
"""
from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .distortion import a_bound_from_lambda


class OrbitError(ValueError):
    """The requested orbit model cannot satisfy its invariants."""


class HorizonError(RuntimeError):
    """The model's breakpoints do not reach far enough."""


class ScheduleError(ValueError):
    """A reach map or schedule violates a structural invariant."""


# -- target sequences --------------------------------------------------------


def _admissible(vals: Sequence[Fraction]) -> bool:
    inc = all(b > a for a, b in zip(vals, vals[1:]))
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    return inc and all(e <= d for d, e in zip(diffs, diffs[1:]))


@dataclass(frozen=True)
class TargetSequence:
    values: tuple[Fraction, ...]  # v_1, v_2, ...
    admissible: bool
    log: tuple[str, ...] = ()

    @classmethod
    def of(cls, values: Sequence) -> "TargetSequence":
        vals = tuple(Fraction(v) for v in values)
        if not vals:
            raise ValueError("empty target sequence")
        if any(v <= 0 for v in vals):
            raise ValueError("target values must be positive")
        return cls(vals, _admissible(vals))

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n - 1]

    def __len__(self) -> int:
        return len(self.values)


def _upper_hull(points: Sequence[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    hull: list[tuple[int, Fraction]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly above the chord
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def concave_majorant(vals: Sequence[Fraction]) -> list[Fraction]:
    """w_n = sup{t : (n, t) in the convex hull of (0, 0) and the points (n, v_n)}."""
    hull = _upper_hull([(0, Fraction(0))] + [(n, v) for n, v in enumerate(vals, start=1)])
    out = []
    seg = 0
    for n in range(1, len(vals) + 1):
        while hull[seg + 1][0] < n:
            seg += 1
        (x1, y1), (x2, y2) = hull[seg], hull[seg + 1]
        out.append(y1 + (y2 - y1) * (n - x1) / (x2 - x1))
    return out


def make_admissible(raw: Sequence, avoid_integers: bool = False) -> TargetSequence:
    """Monotonize with sup_{k<=n} v_k + 1 - 2^-n when needed, then take the concave majorant.

    With ``avoid_integers`` a small increasing concave bump theta (1 - 2^-n)
    moves every value off the integers, which keeps the orbit perturbation
    of ``build_orbit`` from breaking the monotone displacement.
    """
    seq = TargetSequence.of(raw)
    vals = list(seq.values)
    log = []
    if any(b <= a for a, b in zip(vals, vals[1:])):
        top = Fraction(0)
        lifted = []
        for n, v in enumerate(vals, start=1):
            top = max(top, v)
            lifted.append(top + 1 - Fraction(1, 2 ** n))
        vals = lifted
        log.append("sup-monotonization applied")
    hull = concave_majorant(vals)
    if hull != vals:
        log.append("concave majorant applied")
    vals = hull
    if avoid_integers and any(v.denominator == 1 for v in vals):
        gap = min((math.ceil(v) - v for v in vals if v.denominator != 1), default=Fraction(1))
        theta = Fraction(1, 2)
        while theta >= gap:
            theta /= 2
        vals = [v + theta * (1 - Fraction(1, 2 ** n)) for n, v in enumerate(vals, start=1)]
        log.append(f"integer-avoiding bump theta={theta}")
    assert _admissible(vals) and all(w >= v for w, v in zip(vals, seq.values))
    return TargetSequence(tuple(vals), True, tuple(log))


# -- orbit model --------------------------------------------------------------


@dataclass(frozen=True)
class Perturbation:
    n: int
    i: int
    x: Fraction
    delta: Fraction


@dataclass
class OrbitModel:
    """Piecewise-linear increasing h with h(t_n) = t_{n+1} and h = id left of -1."""

    t: tuple[Fraction, ...]  # t_0 = 0, ..., t_H
    xs: list[Fraction]
    ys: list[Fraction]
    track: int
    perturbations: list[Perturbation] = field(default_factory=list)
    _orbits: dict = field(default_factory=dict, repr=False)

    @property
    def horizon(self) -> int:
        return len(self.t) - 1

    @property
    def domain_end(self) -> Fraction:
        return self.xs[-1]

    def h(self, x: Fraction) -> Fraction:
        if x <= -1:
            return x
        if x > self.xs[-1]:
            raise HorizonError(f"h is only modelled up to {self.xs[-1]}")
        k = bisect.bisect_right(self.xs, x) - 1
        if self.xs[k] == x:
            return self.ys[k]
        x0, x1, y0, y1 = self.xs[k], self.xs[k + 1], self.ys[k], self.ys[k + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def orbit(self, x, n: int) -> list[Fraction]:
        """[x, h(x), ..., h^n(x)], cached per starting point."""
        x = Fraction(x)
        orb = self._orbits.setdefault(x, [x])
        while len(orb) <= n:
            orb.append(self.h(orb[-1]))
        return orb[: n + 1]

    def iterate(self, x, n: int) -> Fraction:
        return self.orbit(x, n)[n]

    def displacements(self) -> list[Fraction]:
        return [y - x for x, y in zip(self.xs, self.ys) if x >= 0]


def _check_shape(xs, ys) -> str | None:
    if any(b <= a for a, b in zip(xs, xs[1:])) or any(b <= a for a, b in zip(ys, ys[1:])):
        return "h is not increasing"
    d = [y - x for x, y in zip(xs, ys) if x >= 0]
    for k in range(len(d) - 1):
        if d[k + 1] > d[k]:
            return f"displacement increases after x={xs[xs.index(0) + k]}"
    return None


def build_orbit(v: TargetSequence, horizon: int | None = None, track: int = 64) -> OrbitModel:
    """Exact orbit model with t_n = v_n + eps_n / 2^n.

    Non-integrality of h^n(i) is enforced for integers 0 <= i <= domain end
    and 1 <= n <= ``track`` (while the orbit stays in the modelled range).
    Hits are repaired by inserting a knot moved by a rational of size at
    most 2^-(horizon+n); every repair is logged.
    """
    if not v.admissible:
        raise OrbitError("target sequence is not admissible")
    H = len(v) if horizon is None else horizon
    if H < 2 or H > len(v):
        raise OrbitError(f"horizon must be in [2, {len(v)}]")
    t = [Fraction(0)]
    for n in range(1, H + 1):
        eps = 1 if v[n].denominator == 1 else 0
        t.append(v[n] + Fraction(eps, 2 ** n))
    xs = [Fraction(-1)] + t[:-1]
    ys = [Fraction(-1)] + t[1:]
    err = _check_shape(xs, ys)
    if err:
        raise OrbitError(f"{err}; try make_admissible(..., avoid_integers=True)")
    model = OrbitModel(tuple(t), xs, ys, track)
    for _ in range(10_000):
        hit = _integer_hit(model)
        if hit is None:
            return model
        _repair(model, *hit)
    raise OrbitError("too many integrality repairs")


def _integer_hit(model: OrbitModel) -> tuple[int, int] | None:
    end = model.domain_end
    for i in range(0, math.floor(end) + 1):
        x = Fraction(i)
        for n in range(1, model.track + 1):
            if x > end:
                break
            x = model.h(x)
            if x.denominator == 1:
                return n, i
    return None


def _repair(model: OrbitModel, n: int, i: int) -> None:
    x = model.iterate(i, n - 1)
    if x in model.xs:
        raise OrbitError(f"h^{n}({i}) is an integer at an existing knot")
    y = model.h(x)
    k = bisect.bisect_right(model.xs, x)
    for extra in range(0, 64):
        eta = Fraction(1, 2 ** (model.horizon + n + extra))
        for delta in (eta, -eta):
            xs = model.xs[:k] + [x] + model.xs[k:]
            ys = model.ys[:k] + [y + delta] + model.ys[k:]
            if (y + delta).denominator != 1 and _check_shape(xs, ys) is None:
                model.xs, model.ys = xs, ys
                model.perturbations.append(Perturbation(n, i, x, delta))
                model._orbits.clear()
                return
    raise OrbitError(f"cannot move h^{n}({i}) off the integers without breaking monotone displacement")


def check_orbit(model: OrbitModel) -> list[str]:
    """Re-check the four properties; returns descriptions of violations."""
    bad = []
    err = _check_shape(model.xs, model.ys)
    if err:
        bad.append(f"property 1: {err}")
    for x in (Fraction(-5), Fraction(-3, 2), Fraction(-1)):
        if model.h(x) != x:
            bad.append(f"property 2: h({x}) != {x}")
    hit = _integer_hit(model)
    if hit:
        bad.append(f"property 3: h^{hit[0]}({hit[1]}) is an integer")
    orb = model.orbit(0, model.horizon - 1)
    for n, (x, tn) in enumerate(zip(orb, model.t)):
        if x != tn:
            bad.append(f"property 4: h^{n}(0) != t_{n}")
    return bad


# -- schedules ----------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusSchedule:
    l: int | None
    lam: int
    N: int
    reach: tuple[int, ...]  # reach[j] = i(j)
    partition: dict  # i -> tuple of j
    i0: int
    delays: tuple[int, ...]  # n_0 .. n_N

    def j_of(self, i: int) -> int:
        if i == self.N + 1:
            return self.N + 1
        return self.partition[i][0]


def reach_from_model(model: OrbitModel, l: int) -> list[int]:
    reach = []
    j = 0
    while True:
        if j > model.domain_end:
            raise HorizonError(f"no N found below {model.domain_end}; extend the target sequence")
        try:
            i = math.floor(model.iterate(j, l))
        except HorizonError as e:
            raise HorizonError(f"h^{l}({j}) leaves the modelled range: {e}") from None
        reach.append(i)
        if i == j:
            return reach
        j += 1


def compute_schedule(source: OrbitModel | Mapping[int, int] | Sequence[int], l: int | None = None) -> AnnulusSchedule:
    """Reach map, partition and delays, from an orbit model (needs ``l``) or a raw reach map."""
    if isinstance(source, OrbitModel):
        if l is None or l < 1:
            raise ValueError("l must be >= 1")
        reach = reach_from_model(source, l)
    elif isinstance(source, Mapping):
        keys = sorted(int(k) for k in source)
        if keys != list(range(len(keys))):
            raise ScheduleError("reach map keys must be 0..N")
        reach = [int(source[k]) for k in range(len(keys))]
    else:
        reach = [int(x) for x in source]
    if not reach:
        raise ScheduleError("empty reach map")
    N = len(reach) - 1
    if reach[N] != N:
        raise ScheduleError("reach map must end with i(N) = N")
    for j, i in enumerate(reach):
        if i < j or i > N:
            raise ScheduleError(f"i({j}) = {i} outside [{j}, {N}]")
        if j and i < reach[j - 1]:
            raise ScheduleError(f"reach map decreases at j={j}")
        if j and i - j > reach[j - 1] - (j - 1):
            raise ScheduleError(f"crossing count increases at j={j}")
    lam = reach[0] + 1
    i0 = lam - 1
    partition: dict[int, tuple[int, ...]] = {}
    for j, i in enumerate(reach):
        partition.setdefault(i, ())
        partition[i] += (j,)
    for i in range(i0, N + 1):
        if i not in partition:
            raise ScheduleError(f"A_{i} is empty")
    s = AnnulusSchedule(l, lam, N, tuple(reach), partition, i0, ())
    delays: list[int] = []
    for i in range(N + 1):
        if i < i0:
            delays.append(1)
        else:
            lo = s.j_of(i + 1) - 1
            delays.append(lam - sum(delays[lo:i]))
    s = AnnulusSchedule(l, lam, N, tuple(reach), partition, i0, tuple(delays))
    bad = check_schedule(s)
    if bad:
        raise ScheduleError("; ".join(bad))
    return s


def check_schedule(s: AnnulusSchedule) -> list[str]:
    bad = []
    if s.lam != s.reach[0] + 1 or s.i0 != s.lam - 1:
        bad.append("lambda / i0 mismatch")
    seen = [j for i in sorted(s.partition) for j in s.partition[i]]
    if seen != list(range(s.N + 1)):
        bad.append("partition is not ordered or does not cover [0, N]")
    for i, n in enumerate(s.delays):
        if n < 1:
            bad.append(f"n_{i} = {n} < 1")
    for i in range(s.i0, s.N + 1):
        if i in s.partition and sum(s.delays[s.j_of(i): i]) >= s.lam:
            bad.append(f"partial sum before n_{i} reaches lambda")
    return bad


def _window(s: AnnulusSchedule, j: int, r: int) -> int | None:
    i = s.reach[j]
    for jp in range(j - 1, i):
        upper = s.lam - sum(s.delays[j: jp + 1])
        lower = max(0, s.lam - sum(s.delays[j: jp + 2]))
        if lower <= r < upper:
            return jp
    return None


def crossing_trajectory(s: AnnulusSchedule) -> dict[int, list[int | None]]:
    """L_j(r) for r = 0..lambda-1; None where no window contains r."""
    table = {}
    for j in range(s.N + 1):
        i = s.reach[j]
        row = []
        for r in range(s.lam):
            jp = _window(s, j, r)
            row.append(None if jp is None else (i - j + 1) - (i - jp - 1))
        table[j] = row
    return table


def verify_final(s: AnnulusSchedule, table: dict | None = None) -> tuple[bool, tuple[int, int] | None]:
    """(True, None), or (False, (j, r)) naming the first violation."""
    table = crossing_trajectory(s) if table is None else table
    for j in range(s.N + 1):
        row = table[j]
        start = s.reach[j] - j + 1
        for r, val in enumerate(row):
            if val is None:
                return False, (j, r)
            if r == 0 and val != start:
                return False, (j, 0)
            if r and val not in (row[r - 1], row[r - 1] - 1):
                return False, (j, r)
        if row[-1] != 1:
            return False, (j, s.lam - 1)
    return True, None


def trajectory_csv(table: Mapping[int, Sequence]) -> str:
    """Rows r, columns j."""
    cols = sorted(table)
    rows = max((len(v) for v in table.values()), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r"] + [f"L_{j}" for j in cols])
    for r in range(rows):
        w.writerow([r] + ["" if table[j][r] is None else table[j][r] for j in cols])
    return buf.getvalue()


def lambda_growth_check(v: TargetSequence, model: OrbitModel, lmax: int) -> dict:
    """lambda_l <= v_l + 2^-l + 1 for l <= lmax, with the a_l certificate chain."""
    if model.horizon < lmax:
        raise HorizonError(f"model horizon {model.horizon} < lmax {lmax}")
    rows = []
    for l in range(1, lmax + 1):
        lam = math.floor(model.iterate(0, l)) + 1
        bound = v[l] + Fraction(1, 2 ** l) + 1
        ab = a_bound_from_lambda(lam)
        rows.append({
            "l": l,
            "lambda": lam,
            "bound": bound,
            "ok": lam <= bound,
            "ratio": Fraction(lam, l),
            "a_bound": ab,
        })
    late = rows[-1]["ratio"]
    early = rows[math.ceil(lmax / 4) - 1]["ratio"]
    return {
        "rows": rows,
        "all_ok": all(r["ok"] for r in rows),
        "non_decaying": lmax >= 4 and late > Fraction(3, 4) * early,
    }
