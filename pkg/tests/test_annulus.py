import dataclasses
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from disto.annulus import (
    HorizonError, OrbitError, ScheduleError, TargetSequence, build_orbit, check_orbit,
    check_schedule, compute_schedule, concave_majorant, crossing_trajectory, lambda_growth_check,
    make_admissible, trajectory_csv, verify_final,
)
from disto.distortion import a_bound_from_lambda

FIGURE = {0: 3, 1: 3, 2: 4, 3: 4, 4: 4}


def sqrt_targets(n, c=1):
    return [c * F(round(math.sqrt(k) * 1000), 1000) for k in range(1, n + 1)]


def test_make_admissible_constant():
    v = make_admissible([1] * 6)
    assert all(b > a for a, b in zip(v.values, v.values[1:]))
    assert v.values[:3] == (F(3, 2), F(7, 4), F(15, 8))
    assert v.admissible


def test_make_admissible_keeps_concave_input():
    d = F(1, 20)
    vv = [n - F(n * (n - 1), 2) * d for n in range(1, 10)]
    assert make_admissible(vv).values == tuple(vv)


def test_make_admissible_sqrt():
    v = make_admissible(sqrt_targets(200))
    diffs = [b - a for a, b in zip(v.values, v.values[1:])]
    assert all(e <= d for d, e in zip(diffs, diffs[1:]))


def test_make_admissible_errors():
    with pytest.raises(ValueError):
        make_admissible([])
    with pytest.raises(ValueError):
        make_admissible([1, -1])


def hull_oracle(vals):
    # brute force: w_n = max over pairs of chords through (i, v_i), (j, v_j) with i <= n <= j
    pts = [(0, F(0))] + list(enumerate(vals, start=1))
    out = []
    for n in range(1, len(vals) + 1):
        best = vals[n - 1]
        for i, vi in pts:
            for j, vj in pts:
                if i < n < j:
                    best = max(best, vi + (vj - vi) * (n - i) / (j - i))
        out.append(best)
    return out


@settings(max_examples=60)
@given(st.lists(st.fractions(min_value=F(1, 8), max_value=20, max_denominator=8), min_size=1, max_size=12))
def test_concave_majorant_matches_oracle(vals):
    assert concave_majorant(vals) == hull_oracle(vals)


@settings(max_examples=60)
@given(st.lists(st.fractions(min_value=F(1, 8), max_value=20, max_denominator=8), min_size=1, max_size=20))
def test_make_admissible_dominates(raw):
    v = make_admissible(raw, avoid_integers=True)
    assert v.admissible
    assert all(w >= x for w, x in zip(v.values, raw))
    assert all(x.denominator != 1 for x in v.values)


def test_orbit_integer_targets():
    v = TargetSequence.of([4, 7, 9, 10])
    m = build_orbit(v)
    assert m.t == (0, F(9, 2), F(29, 4), F(73, 8), F(161, 16))
    assert check_orbit(m) == []


def test_orbit_non_integer_targets():
    v = make_admissible(sqrt_targets(300), avoid_integers=True)
    m = build_orbit(v)
    assert list(m.t[1:]) == list(v.values)
    assert check_orbit(m) == []


def test_orbit_rejects_bad_input():
    with pytest.raises(OrbitError):
        build_orbit(TargetSequence.of([1, 3, 4, 6]))
    # v_n = n/2 is admissible but eps-perturbation spoils the displacement
    with pytest.raises(OrbitError):
        build_orbit(TargetSequence.of([F(n, 2) for n in range(1, 10)]))


def test_orbit_repairs_are_logged_and_small():
    v = TargetSequence.of([4, 7, 9, 10])
    m = build_orbit(v)
    for q in m.perturbations:
        assert abs(q.delta) <= F(1, 2 ** (m.horizon + q.n))


def random_admissible(rng):
    c = F(rng.randint(2, 8), 4)
    alpha = rng.choice([F(1, 3), F(2, 5), F(1, 2)])
    raw = [c * F(round(k ** float(alpha) * 997), 997) * (1 + F(rng.randint(-20, 20), 1000))
           for k in range(1, 301)]
    return make_admissible(raw, avoid_integers=True)


def test_displacement_nonincreasing_random():
    rng = random.Random(5)
    for _ in range(200):
        m = build_orbit(random_admissible(rng), track=4)
        d = m.displacements()
        assert all(b <= a for a, b in zip(d, d[1:]))


def test_figure_schedule():
    s = compute_schedule(FIGURE)
    assert (s.lam, s.N, s.i0) == (4, 4, 3)
    assert s.delays == (1, 1, 1, 2, 4)
    assert s.partition == {3: (0, 1), 4: (2, 3, 4)}
    t = crossing_trajectory(s)
    assert t[0] == [4, 3, 2, 1]
    assert t[2] == [3, 2, 2, 1]
    assert t[4] == [1, 1, 1, 1]
    assert verify_final(s) == (True, None)


def test_trivial_schedule():
    s = compute_schedule([0])
    assert (s.lam, s.N) == (1, 0)
    assert verify_final(s) == (True, None)


def test_tampered_schedule_names_violation():
    s = compute_schedule(FIGURE)
    bad = dataclasses.replace(s, delays=(1, 1, 1, 3, 4))
    ok, where = verify_final(bad)
    assert not ok and where == (2, 0)
    assert check_schedule(bad)


def test_bad_reach_maps():
    with pytest.raises(ScheduleError):
        compute_schedule([1, 1, 3])
    with pytest.raises(ScheduleError):
        compute_schedule({0: 2, 1: 1, 2: 2})
    with pytest.raises(ScheduleError):
        compute_schedule({0: 1, 1: 3, 2: 3, 3: 3})


def test_csv_export():
    text = trajectory_csv(crossing_trajectory(compute_schedule(FIGURE)))
    assert text.splitlines()[0] == "r,L_0,L_1,L_2,L_3,L_4"
    assert text.splitlines()[1] == "0,4,3,3,2,1"


def test_schedule_from_model():
    v = make_admissible(sqrt_targets(800), avoid_integers=True)
    m = build_orbit(v, track=60)
    for l in (1, 2, 8, 30):
        s = compute_schedule(m, l)
        assert s.lam == math.floor(m.iterate(0, l)) + 1
        assert math.floor(m.iterate(s.N, l)) == s.N
        assert all(math.floor(m.iterate(j, l)) > j for j in range(s.N))
        assert verify_final(s)[0]
        assert len(set(s.reach)) == len(s.partition)


def test_schedule_horizon_error():
    v = make_admissible(sqrt_targets(20), avoid_integers=True)
    m = build_orbit(v)
    with pytest.raises(HorizonError):
        compute_schedule(m, 15)


def test_lambda_growth_sqrt():
    v = make_admissible([math.ceil(math.sqrt(n)) for n in range(1, 801)], avoid_integers=True)
    m = build_orbit(v, track=51)
    rep = lambda_growth_check(v, m, 50)
    assert rep["all_ok"] and not rep["non_decaying"]
    assert rep["rows"][0]["lambda"] == math.floor(m.h(F(0))) + 1
    for row in rep["rows"]:
        assert row["a_bound"] == a_bound_from_lambda(row["lambda"])


def test_lambda_growth_linear_flagged():
    v = make_admissible([F(n, 2) for n in range(1, 200)], avoid_integers=True)
    m = build_orbit(v, track=4)
    rep = lambda_growth_check(v, m, 50)
    assert rep["all_ok"] and rep["non_decaying"]
    assert rep["rows"][-1]["lambda"] in (25, 26)
