import math

import numpy as np
import pytest
from hypothesis import assume, given
import hypothesis.strategies as st

from loewner_lab.errors import InputError, WeightOutOfRange
from loewner_lab.hypotheses import (
    TOUCH_SLACK,
    HypothesisReport,
    ell_sandwich_condition,
    hh_condition,
    operator_bounds,
    power_condition,
    sandwich_condition,
    thm1_condition,
    thm1_weight_set,
    thm2_condition,
)
from loewner_lab.spectral import Interval, SymMatrix

from conftest import CX_A, CX_B, EX_A, EX_B

TAU_A = Interval(4 - math.sqrt(2), 4 + math.sqrt(2))
TAU_B = Interval(9.5 - math.sqrt(1.25), 9.5 + math.sqrt(1.25))

pos = st.floats(0.01, 100.0)


@st.composite
def intervals(draw, degenerate_ok=True):
    lo = draw(pos)
    if degenerate_ok and draw(st.booleans()):
        return Interval(lo, lo)
    return Interval(lo, lo + draw(st.floats(0.001, 50.0)))


def brute_disjoint(a: Interval, b: Interval) -> bool:
    return a.hi < b.lo or b.hi < a.lo


# --- operator bounds -------------------------------------------------------


def test_operator_bounds_closed_forms():
    a = operator_bounds(SymMatrix(EX_A))
    b = operator_bounds(SymMatrix(EX_B))
    assert (a.lo, a.hi) == pytest.approx((2.585786, 5.414214), abs=1e-6)
    assert (b.lo, b.hi) == pytest.approx((8.381966, 10.618034), abs=1e-6)
    c = operator_bounds(SymMatrix.identity(3, 2.5))
    assert (c.lo, c.hi) == pytest.approx((2.5, 2.5), abs=1e-15)


# --- thm1 ------------------------------------------------------------------


def test_thm1_separated_pair():
    r = thm1_condition(TAU_A, TAU_B, 0.5)
    assert r.holds
    J = r.intervals["J"]
    assert (J.lo, J.hi) == pytest.approx((5.483876, 8.016124), abs=1e-6)
    assert r.details["gap_to_nN"] == pytest.approx(0.069662, abs=1e-6)
    assert r.details["gap_to_mM"] == pytest.approx(0.365842, abs=1e-6)


def test_thm1_overlapping_pair_fails():
    r = thm1_condition(Interval(0, 2), Interval(2 - math.sqrt(2), 2 + math.sqrt(2)), 0.5)
    assert not r.holds and r.margin < 0


def test_thm1_degenerate_points():
    assert thm1_condition(Interval(1, 1), Interval(3, 3), 0.5).holds


def test_thm1_touching_is_not_disjoint():
    # J = [2, 3] touches [1, 2]
    assert not thm1_condition(Interval(1, 2), Interval(3, 4), 0.5).holds


@pytest.mark.parametrize("v", [0.0, 1.0, -0.1, 1.5])
def test_thm1_weight_range(v):
    with pytest.raises(WeightOutOfRange):
        thm1_condition(Interval(1, 2), Interval(3, 4), v)


@given(intervals(), intervals(), st.floats(0.001, 0.999))
def test_thm1_matches_brute_force(nN, mM, v):
    r = thm1_condition(nN, mM, v)
    J = Interval((1 - v) * nN.lo + v * mM.lo, (1 - v) * nN.hi + v * mM.hi)
    gaps = (max(J.lo - nN.hi, nN.lo - J.hi), max(J.lo - mM.hi, mM.lo - J.hi))
    assume(all(abs(g) > 1e-9 for g in gaps))
    assert r.holds == (brute_disjoint(J, nN) and brute_disjoint(J, mM))
    assert r.holds == (r.margin >= 0)


@given(intervals(), intervals(), st.floats(0.001, 0.999))
def test_thm1_swap_symmetry(nN, mM, v):
    a, b = thm1_condition(nN, mM, v), thm1_condition(mM, nN, 1 - v)
    assume(abs(a.margin) > 1e-9)
    assert a.holds == b.holds
    assert a.margin == pytest.approx(b.margin, rel=1e-9, abs=1e-9)


@given(intervals(), intervals(), st.floats(0.001, 0.999))
def test_thm1_mean_interval_inside_hull(nN, mM, v):
    J = thm1_condition(nN, mM, v).intervals["J"]
    lo, hi = min(nN.lo, mM.lo), max(nN.hi, mM.hi)
    eps = 1e-12 * hi
    assert lo - eps <= J.lo and J.hi <= hi + eps


# --- thm2 ------------------------------------------------------------------


def test_thm2_examples():
    r = thm2_condition(Interval(1, 2), Interval(5, 6), 2)
    assert (r.details["c"], r.details["d"]) == (8.0, 11.0)
    assert not r.holds and not r.details["contains_nN"]
    r = thm2_condition(Interval(4, 6), Interval(1, 9), 2)
    assert (r.details["c"], r.details["d"]) == (-4.0, 14.0)
    assert not r.holds and not r.details["disjoint_from_mM"]
    assert not thm2_condition(Interval(2, 2), Interval(1, 3), 2).holds


def test_thm2_weight_range():
    with pytest.raises(WeightOutOfRange):
        thm2_condition(Interval(1, 2), Interval(3, 4), 0.5)


@given(intervals(degenerate_ok=False), intervals(), st.floats(1.0, 20.0))
def test_thm2_never_holds_with_nondegenerate_nN(nN, mM, v):
    # c = N + v(m - N) <= n < N forces m < N.  Missing [m, M] then needs
    # d < m (but d >= N > m) or c > M (but c <= n < N and c > M >= m gives
    # (1 - v)(N - m) > 0, impossible for v >= 1)
    assert not thm2_condition(nN, mM, v).holds


@given(intervals(), intervals(), st.floats(1.0, 20.0))
def test_thm2_holds_iff_margin_nonnegative(nN, mM, v):
    r = thm2_condition(nN, mM, v)
    assert r.holds == (r.margin >= 0)


# --- hh --------------------------------------------------------------------


def test_hh_degenerate_points_hold():
    r = hh_condition(Interval(1, 1), Interval(3, 3), 99)
    assert r.holds and r.details["holds_on_grid"] and r.margin >= 0


def test_hh_separated_pair_fails_near_zero():
    r = hh_condition(TAU_A, TAU_B, 99)
    assert not r.holds
    assert not thm1_condition(TAU_A, TAU_B, 0.01).holds
    lo, hi = r.details["grid_windows"][0]
    assert 0 < lo and hi < 1


def test_hh_grid_survivor_is_rejected():
    # every grid point passes, but the gap to [n, N] closes as v -> 0
    nN, mM = Interval(1.0, 1.001), Interval(50.0, 50.2)
    r = hh_condition(nN, mM, 99)
    assert r.details["holds_on_grid"]
    assert not r.holds and r.margin < 0


@given(intervals(), intervals(), st.integers(2, 200))
def test_hh_fails_for_nondegenerate(nN, mM, grid):
    assume(nN.lo < nN.hi or mM.lo < mM.hi)
    r = hh_condition(nN, mM, grid)
    assert not r.holds and r.margin < 0


@given(pos, pos)
def test_hh_exact_matches_dense_oracle(a, b):
    # point spectra: the condition holds iff a != b
    assume(abs(a - b) > 1e-6)
    vs = np.concatenate([np.geomspace(1e-9, 0.5, 2000), 1 - np.geomspace(1e-9, 0.5, 2000)])
    J = (1 - vs) * a + vs * b
    oracle = bool(np.all((J != a) & (J != b)))
    assert hh_condition(Interval(a, a), Interval(b, b)).holds == oracle


def test_hh_grid_too_small():
    with pytest.raises(InputError):
        hh_condition(Interval(1, 1), Interval(3, 3), 1)


def test_weight_set_agrees_with_pointwise():
    nN, mM = TAU_A, TAU_B
    windows = thm1_weight_set(nN, mM)
    for v in np.linspace(0.01, 0.99, 197):
        inside = any(lo <= v <= hi for lo, hi in windows)
        assert inside == thm1_condition(nN, mM, v).holds


# --- sandwich --------------------------------------------------------------


def test_sandwich_examples():
    assert sandwich_condition(2, Interval(1, 1.5), 3).holds
    assert not sandwich_condition(1, Interval(1, 2), 3).holds
    assert not sandwich_condition(0, Interval(1, 2), 10).holds


def test_ell_sandwich_examples():
    assert ell_sandwich_condition(1, Interval(1, 2), 6, 3).holds
    assert not ell_sandwich_condition(5, Interval(1, 2), 6, 3).holds
    a = ell_sandwich_condition(2, Interval(1, 1.5), 3, 2)
    assert a.holds == sandwich_condition(2, Interval(1, 1.5), 3).holds


@given(st.floats(-1, 10), intervals(), st.floats(0.01, 200), st.integers(1, 5))
def test_sandwich_brute_force(m, nN, M, ell):
    r = ell_sandwich_condition(m, nN, M, ell)
    assert r.holds == (0 < m <= ell * nN.lo and ell * nN.hi <= M)
    assert r.holds == (r.margin >= 0)


# --- power / reports -------------------------------------------------------


def test_power_condition_examples():
    assert power_condition(SymMatrix(EX_A), SymMatrix(EX_B)).holds
    r = power_condition(SymMatrix(CX_A), SymMatrix(CX_B))
    assert not r.holds
    tm = r.intervals["tau_mid"]
    assert (tm.lo, tm.hi) == pytest.approx(((3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2), abs=1e-12)


def test_report_round_trip():
    r = hh_condition(TAU_A, TAU_B)
    assert HypothesisReport.from_dict(r.to_dict()) == r


def test_touch_slack_constant():
    assert TOUCH_SLACK == 1e-12
