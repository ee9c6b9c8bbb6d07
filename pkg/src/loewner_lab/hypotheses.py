"""Spectral-interval preconditions of the inequality checkers.

Every checker returns a :class:`HypothesisReport` whose ``margin`` is the
smallest gap achieving the condition (negative when violated), so that
``holds == (margin >= 0)``.  Interval disjointness is strict: a gap smaller
than ``TOUCH_SLACK`` counts as touching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, WeightOutOfRange
from .spectral import Interval, SymMatrix, spectral_interval

TOUCH_SLACK = 1e-12
DEFAULT_HH_GRID = 99


@dataclass(frozen=True)
class HypothesisReport:
    condition_name: str
    holds: bool
    intervals: dict = field(default_factory=dict)
    margin: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "condition_name": self.condition_name,
            "holds": self.holds,
            "intervals": {k: v.to_list() for k, v in self.intervals.items()},
            "margin": self.margin,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HypothesisReport":
        return cls(
            d["condition_name"],
            bool(d["holds"]),
            {k: Interval.from_list(v) for k, v in d["intervals"].items()},
            float(d["margin"]),
            d.get("details", {}),
        )


def _report(name, margin, intervals, **details) -> HypothesisReport:
    margin = float(margin)
    return HypothesisReport(name, margin >= 0, intervals, margin, details)


def operator_bounds(A: SymMatrix) -> Interval:
    """Tightest n, N with n <= A <= N."""
    return spectral_interval(A)


def separation(lo1, hi1, lo2, hi2):
    """Gap between [lo1, hi1] and [lo2, hi2]; minus the overlap depth if they meet."""
    return np.maximum(lo2 - hi1, lo1 - hi2)


def thm1_gaps(n, N, m, M, v):
    """Raw gaps of J = [n(1-v)+mv, N(1-v)+Mv] from [n, N] and from [m, M]."""
    lo = (1 - v) * n + v * m
    hi = (1 - v) * N + v * M
    return separation(lo, hi, n, N), separation(lo, hi, m, M)


def thm1_margin_array(n, N, m, M, v):
    ga, gb = thm1_gaps(n, N, m, M, v)
    return np.minimum(ga, gb) - TOUCH_SLACK


def thm1_condition(nN: Interval, mM: Interval, v: float) -> HypothesisReport:
    """J disjoint from both [n, N] and [m, M] for J the v-mean of the bounds."""
    v = float(v)
    if not 0.0 < v < 1.0:
        raise WeightOutOfRange(f"weight must lie in (0, 1), got {v}")
    n, N, m, M = nN.lo, nN.hi, mM.lo, mM.hi
    J = Interval((1 - v) * n + v * m, (1 - v) * N + v * M)
    ga, gb = (float(g) for g in thm1_gaps(n, N, m, M, v))
    return _report(
        "thm1",
        min(ga, gb) - TOUCH_SLACK,
        {"nN": nN, "mM": mM, "J": J},
        v=v,
        gap_to_nN=ga,
        gap_to_mM=gb,
    )


def thm2_margin_array(n, N, m, M, v):
    c = (1 - v) * N + v * m
    d = (1 - v) * n + v * M
    sep = np.where(c <= d, separation(c, d, m, M), np.inf) - TOUCH_SLACK
    contain = np.minimum(n - c, d - N)
    return np.minimum(sep, contain)


def thm2_condition(nN: Interval, mM: Interval, v: float) -> HypothesisReport:
    """[c, d] = [N(1-v)+mv, n(1-v)+Mv] misses [m, M] and contains [n, N]."""
    v = float(v)
    if not v >= 1.0:
        raise WeightOutOfRange(f"weight must be >= 1, got {v}")
    n, N, m, M = nN.lo, nN.hi, mM.lo, mM.hi
    c = (1 - v) * N + v * m
    d = (1 - v) * n + v * M
    intervals = {"nN": nN, "mM": mM}
    if c <= d:
        intervals["cd"] = Interval(c, d)
        sep = float(separation(c, d, m, M)) - TOUCH_SLACK
    else:
        # empty [c, d] misses everything and contains nothing
        sep = math.inf
    contain = min(n - c, d - N)
    return _report(
        "thm2",
        min(sep, contain),
        intervals,
        v=v,
        c=c,
        d=d,
        disjoint_from_mM=sep >= 0,
        separation=sep,
        contains_nN=contain >= 0,
        containment_margin=contain,
    )


# ---------------------------------------------------------------------------
# exact v-analysis for the "for all v in (0, 1)" condition
# ---------------------------------------------------------------------------


def _halfline(a: float, b: float) -> list[tuple[float, float]]:
    """{v : a + b v >= 0} as a list of closed intervals."""
    if b > 0:
        return [(-a / b, math.inf)]
    if b < 0:
        return [(-math.inf, -a / b)]
    return [(-math.inf, math.inf)] if a >= 0 else []


def _merge(parts):
    parts = sorted(parts)
    out = []
    for lo, hi in parts:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _intersect(xs, ys):
    out = []
    for a, b in xs:
        for c, d in ys:
            lo, hi = max(a, c), min(b, d)
            if lo <= hi:
                out.append((lo, hi))
    return _merge(out)


def thm1_weight_set(nN: Interval, mM: Interval) -> list[tuple[float, float]]:
    """All real v for which the disjointness condition holds, as closed intervals."""
    n, N, m, M = nN.lo, nN.hi, mM.lo, mM.hi
    s = TOUCH_SLACK
    # J.lo = n + v(m - n), J.hi = N + v(M - N)
    off_nN = _merge(_halfline(n - N - s, m - n) + _halfline(n - N - s, -(M - N)))
    off_mM = _merge(_halfline(n - M - s, m - n) + _halfline(m - N - s, -(M - N)))
    return _intersect(off_nN, off_mM)


_GAP_LINES = (
    # gap(v) = max(a1 + b1 v, a2 + b2 v), for J against [n, N] and against [m, M]
    lambda n, N, m, M: (n - N, m - n, n - N, -(M - N)),
    lambda n, N, m, M: (n - M, m - n, m - N, -(M - N)),
)


def _breakpoints(n, N, m, M) -> list[float]:
    """0, 1 and every kink of the two gap functions inside (0, 1), sorted."""
    pts = {0.0, 1.0}
    for lines in _GAP_LINES:
        a1, b1, a2, b2 = lines(n, N, m, M)
        if b1 != b2:
            v = (a2 - a1) / (b1 - b2)
            if 0.0 < v < 1.0:
                pts.add(v)
    return sorted(pts)


def _gap_min(n, N, m, M, v) -> float:
    return float(np.min(thm1_gaps(n, N, m, M, v)))


def holds_for_all_weights(n, N, m, M) -> bool:
    """Exact test of gap(v) > 0 for every v in the open interval (0, 1).

    Both gaps are convex and piecewise linear in v, so it is enough to look
    at the endpoints (where the limit may touch), the interior kinks and one
    interior point of every linear piece.
    """
    pts = _breakpoints(n, N, m, M)
    if _gap_min(n, N, m, M, 0.0) < -TOUCH_SLACK or _gap_min(n, N, m, M, 1.0) < -TOUCH_SLACK:
        return False
    interior = pts[1:-1] + [0.5 * (a + b) for a, b in zip(pts, pts[1:])]
    return all(_gap_min(n, N, m, M, v) - TOUCH_SLACK >= 0 for v in interior)


def _convex_pieces_min(n, N, m, M):
    """Minimum over v in [0, 1] of the thm1 margin (piecewise linear in v)."""
    return float(np.min(thm1_margin_array(n, N, m, M, np.array(_breakpoints(n, N, m, M)))))


def _runs(vs, ok):
    runs = []
    start = None
    for v, good in zip(vs, ok):
        if good and start is None:
            start = prev = v
        elif good:
            prev = v
        elif start is not None:
            runs.append([start, prev])
            start = None
    if start is not None:
        runs.append([start, prev])
    return runs


def hh_condition(nN: Interval, mM: Interval, grid: int = DEFAULT_HH_GRID) -> HypothesisReport:
    """The thm1 condition for every v in (0, 1).

    The grid v = i/(grid+1) is evaluated and reported, but the verdict is
    exact: the gaps are piecewise linear in v, and a finite grid misses the
    v -> 0 and v -> 1 limits.
    """
    if grid < 2:
        raise InputError("grid must be >= 2")
    vs = np.arange(1, grid + 1) / (grid + 1)
    margins = thm1_margin_array(nN.lo, nN.hi, mM.lo, mM.hi, vs)
    ok = margins >= 0
    windows = [
        [max(lo, 0.0), min(hi, 1.0)]
        for lo, hi in thm1_weight_set(nN, mM)
        if hi >= 0.0 and lo <= 1.0
    ]
    grid_min = float(margins.min())
    if holds_for_all_weights(nN.lo, nN.hi, mM.lo, mM.hi):
        # gaps shrink to 0 at an endpoint limit, so the grid may dip below the slack
        margin = max(grid_min, 0.0)
    else:
        margin = min(grid_min, _convex_pieces_min(nN.lo, nN.hi, mM.lo, mM.hi), -TOUCH_SLACK)
    return _report(
        "hh",
        margin,
        {"nN": nN, "mM": mM},
        grid=grid,
        grid_holds_count=int(ok.sum()),
        holds_on_grid=bool(ok.all()),
        grid_windows=_runs(vs.tolist(), ok.tolist()),
        exact_windows=windows,
    )


def sandwich_margin_array(m, n, N, M, ell=2):
    margin = np.minimum(ell * n - m, M - ell * N)
    return np.where(m > 0, margin, np.minimum(margin, np.minimum(m, -5e-324)))


def ell_sandwich_condition(m: float, nN: Interval, M: float, ell: int) -> HypothesisReport:
    """0 < m <= ell*n and ell*N <= M."""
    if ell < 1:
        raise InputError("ell must be >= 1")
    margin = float(sandwich_margin_array(float(m), nN.lo, nN.hi, float(M), ell))
    return _report(
        "sandwich" if ell == 2 else f"sandwich_ell{ell}",
        margin,
        {"nN": nN, "scaled": nN.scaled(ell)},
        m=float(m),
        M=float(M),
        ell=int(ell),
    )


def sandwich_condition(m: float, nN: Interval, M: float) -> HypothesisReport:
    """0 < m <= 2n <= 2N <= M."""
    return ell_sandwich_condition(m, nN, M, 2)


def power_condition(A: SymMatrix, B: SymMatrix) -> HypothesisReport:
    """tau(A) and tau(B) both disjoint from tau((A+B)/2)."""
    ta, tb = spectral_interval(A), spectral_interval(B)
    tm = spectral_interval((A + B) * 0.5)
    ga, gb = ta.separation(tm), tb.separation(tm)
    return _report(
        "power",
        min(ga, gb) - TOUCH_SLACK,
        {"tau_A": ta, "tau_B": tb, "tau_mid": tm},
        gap_A=ga,
        gap_B=gb,
    )
