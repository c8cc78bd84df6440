import math

import pytest

from cubicfields.characters import SplittingType, splitting_type
from cubicfields.experiments import (
    ALPHA,
    GAP_TOLERANCE,
    REFERENCE_LINES,
    count_at_or_above,
    gap_exponent,
    run_census,
    run_tuples,
    split_bound,
)
from cubicfields.fields import g_eval
from cubicfields.lfunc import GRH_CONSTANT, THRESHOLD_CONSTANT


@pytest.fixture(scope="module")
def census300():
    return run_census(300)


def test_alpha():
    assert ALPHA == pytest.approx(0.029884, abs=1e-6)
    assert (1 + ALPHA) ** 4 == pytest.approx(9 / 8)


def test_census_100_rows():
    rows, summary = run_census(100)
    assert len(rows) == summary.rows == 64
    assert [r.t for r in rows] == sorted(r.t for r in rows)
    assert all(r.t % 3 for r in rows) and 5 not in [r.t for r in rows]


def test_census_rows(census300):
    rows, _ = census300
    for r in rows:
        assert isinstance(r.h, int) and r.h >= 1
        assert r.conductor == g_eval(r.t) and r.discriminant == r.conductor**2
        assert abs(r.h - math.sqrt(r.discriminant) * r.abs_L**2 / (4 * r.regulator)) <= 1e-3
        assert r.backend == "exact" and r.ratio > 0


def test_census_summary(census300):
    rows, s = census300
    counts = [count_at_or_above(rows, c) for c in sorted(REFERENCE_LINES.values())]
    assert counts == sorted(counts, reverse=True)
    assert s.counts_at_or_above["threshold_4_91"] == count_at_or_above(rows, THRESHOLD_CONSTANT)
    assert s.counts_at_or_above["grh_64_91"] == count_at_or_above(rows, GRH_CONSTANT)
    assert s.spearman_split_vs_ratio > 0
    grid = [c / 20 for c in range(0, 60)]
    seq = [count_at_or_above(rows, c) for c in grid]
    assert all(a >= b for a, b in zip(seq, seq[1:]))


def test_split_bound():
    # t = 1: 5 splits, 7 is inert
    assert split_bound(1) == 6
    for t in (2, 4, 7, 11):
        P = split_bound(t)
        assert all(splitting_type(t, p) is SplittingType.SPLIT for p in (5, 7, 11, 13, 17, 19, 23) if p <= P)


def test_euler_census_backend():
    rows, s = run_census(60, backend="euler")
    exact, _ = run_census(60)
    assert s.backend == "euler" and s.Q == pytest.approx(math.sqrt(2) * g_eval(60))
    assert [r.t for r in rows] == [r.t for r in exact]
    assert sum(r.h != e.h for r, e in zip(rows, exact)) <= 0.1 * len(rows)


def test_census_errors():
    with pytest.raises(ValueError):
        run_census(10**4)
    with pytest.raises(ValueError):
        run_census(10, backend="nope")


def test_threads_give_identical_rows():
    a, _ = run_census(40, threads=1)
    b, _ = run_census(40, threads=2)
    assert a == b


@pytest.mark.parametrize("D1, D2, want", [(10**4, 2 * 10**4, 1.0), (10**6, 10**6 + 1, 0.0)])
def test_gap_exponent(D1, D2, want):
    assert gap_exponent(D1, D2) == pytest.approx(want)


@pytest.mark.parametrize("D1, D2", [(100, 100), (200, 100), (10, 20)])
def test_gap_exponent_errors(D1, D2):
    with pytest.raises(ValueError):
        gap_exponent(D1, D2)


def test_tuples_desk_scale_is_empty():
    rep = run_tuples(2, 10**16, 11 / math.log(10**16))
    assert rep.empty and rep.status == "no tuples at this scale"
    assert rep.construction.q == 2310 and rep.window == (10**4, 10298)
    assert rep.gap_threshold == 0.75 + GAP_TOLERANCE


def test_tuples_k1_has_no_gaps():
    rep = run_tuples(1, 10**20, 7.5 / math.log(10**20), max_tuples=5)
    assert not rep.empty and rep.gap_exponents == []
    assert all(len(tup) == 1 for tup in rep.tuples)


@pytest.fixture(scope="module")
def tuples24():
    return run_tuples(2, 10**24, 11.5 / math.log(10**24))


def test_tuples_at_1e24(tuples24):
    rep = tuples24
    assert len(rep.tuples) >= 10
    assert rep.X == pytest.approx(0.75 * 10**24)
    assert all(rep.in_window) and all(rep.splitting_ok)
    assert len(rep.gap_exponents) == len(rep.tuples)
    for tup in rep.tuples:
        ds = [r.discriminant for r in tup]
        assert ds == sorted(ds) and len(set(r.conductor for r in tup)) == len(tup)
        assert all(rep.X <= D <= 2 * rep.X for D in ds)
        assert all(r.ratio > 0 and r.h >= 1 for r in tup)
    # D_2 - D_1 ~ 4 delta t^3, so the exponent is about 3/4 + log(4 delta) / (4 log t)
    delta = abs(rep.construction.deltas[1])
    for tup, gap in zip(rep.tuples, rep.gap_exponents):
        t = tup[0].t
        assert gap == pytest.approx(0.75 + math.log(4 * delta) / (4 * math.log(t)), abs=0.01)
        assert gap < 1


def test_default_z_removes_everything_at_desk_scale():
    rep = run_tuples(2, 10**24, 11.5 / math.log(10**24), z="default")
    assert rep.z_mode == "default" and rep.z > g_eval(rep.window[1] + 10**4)
    assert rep.empty and rep.sieve_counts["window"] > 0
