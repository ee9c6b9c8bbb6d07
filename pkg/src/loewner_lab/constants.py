"""Mond-Pecaric ratio constants and the finite-sum Jensen bounds built on them.

For f > 0 on [m, M] the ratio  secant(t) / f(t)  equals 1 at both ends, so
K (its maximum) is >= 1 and k (its minimum) is <= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInterval,
    FlagMissing,
    InputError,
    NonPositiveFunction,
    SpectraOutOfBounds,
    WeightsNotNormalized,
)
from .functions import ScalarFunction
from .reports import InequalityReport, input_digest
from .spectral import (
    DEFAULT_REL_TOL,
    DOMAIN_REL_SLACK,
    SymMatrix,
    apply_function,
    loewner_compare,
    spectral_interval,
)

GRID_POINTS = 4096
GOLDEN_TOL = 1e-12
TIE_REL = 1e-12
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RatioConstant:
    kind: str  # "K" (max) or "k" (min)
    value: float
    argpoint: float
    m: float
    M: float
    method: str = "grid+golden_section"
    grid_points: int = GRID_POINTS

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, d: dict) -> "RatioConstant":
        return cls(**d)


def _ratio_fn(f: ScalarFunction, m: float, M: float):
    fm, fM = float(f(m)), float(f(M))

    def ratio(t):
        t = np.asarray(t, dtype=float)
        return ((M - t) * fm + (t - m) * fM) / ((M - m) * f(t))

    return ratio


def _validate(m: float, M: float, f: ScalarFunction) -> np.ndarray:
    m, M = float(m), float(M)
    if not (math.isfinite(m) and math.isfinite(M)):
        raise InputError("m and M must be finite")
    if m == M:
        raise DegenerateInterval(f"ratio constants need m < M, got m == M == {m}")
    if not 0 < m < M:
        raise InputError(f"ratio constants need 0 < m < M, got m={m}, M={M}")
    if not (f.domain.contains(m) and f.domain.contains(M)):
        raise InputError(f"[{m}, {M}] is not inside the domain {f.domain} of {f}")
    grid = np.linspace(m, M, GRID_POINTS)
    values = f(grid)
    if not np.all(values > 0):
        raise NonPositiveFunction(f"{f} is not strictly positive on [{m}, {M}] (min {values.min():.6g})")
    return grid


def golden_section(g, a: float, b: float, tol: float = GOLDEN_TOL, maximize: bool = False):
    """Golden-section search for the extremum of a unimodal g on [a, b].

    Returns (t, g(t)) for the best point probed.
    """
    sign = -1.0 if maximize else 1.0

    def h(t):
        return sign * float(g(t))

    tol = max(tol, 4 * np.finfo(float).eps * max(abs(a), abs(b)))
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    while b - a > tol:
        if hc <= hd:
            b, d, hd = d, c, hc
            c = b - INV_PHI * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + INV_PHI * (b - a)
            hd = h(d)
    t, ht = (c, hc) if hc <= hd else (d, hd)
    return t, sign * ht


def _optimize(kind: str, m: float, M: float, f: ScalarFunction) -> RatioConstant:
    grid = _validate(m, M, f)
    m, M = float(m), float(M)
    ratio = _ratio_fn(f, m, M)
    values = ratio(grid)
    maximize = kind == "K"
    # argmax/argmin return the first hit: ties go to the smallest t
    i = int(np.argmax(values) if maximize else np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    t, val = golden_section(ratio, lo, hi, maximize=maximize)
    best_t, best = float(grid[i]), float(values[i])
    if (val > best) if maximize else (val < best):
        best_t, best = float(t), float(val)
    # values within roundoff of the optimum count as ties; report the smallest t
    tie = TIE_REL * max(1.0, abs(best))
    tied = values >= best - tie if maximize else values <= best + tie
    if tied.any():
        first = float(grid[int(np.argmax(tied))])
        if first < best_t:
            best_t = first
    return RatioConstant(kind, best, best_t, m, M)


def big_K(m: float, M: float, f: ScalarFunction) -> RatioConstant:
    """K(m, M, f): maximum of secant/f over [m, M]."""
    return _optimize("K", m, M, f)


def small_k(m: float, M: float, f: ScalarFunction) -> RatioConstant:
    """k(m, M, f): minimum of secant/f over [m, M]."""
    return _optimize("k", m, M, f)


def grid_oracle(kind: str, m: float, M: float, f: ScalarFunction, points: int = 2**17) -> float:
    """Dense-grid brute force of the same constant, for cross-checking."""
    t = np.linspace(float(m), float(M), points)
    r = _ratio_fn(f, float(m), float(M))(t)
    return float(r.max() if kind == "K" else r.min())


# ---------------------------------------------------------------------------
# Jensen bounds with ratio constants
# ---------------------------------------------------------------------------


def require_spectra_within(ops, m: float, M: float):
    for i, A in enumerate(ops):
        tau = spectral_interval(A)
        slack = DOMAIN_REL_SLACK * max(1.0, A.frobenius)
        if tau.lo < m - slack or tau.hi > M + slack:
            raise SpectraOutOfBounds(
                f"operator {i} has spectrum [{tau.lo:.6g}, {tau.hi:.6g}] outside [{m:.6g}, {M:.6g}]"
            )


def _weighted_inputs(weights, operators, m, M):
    w = np.asarray(weights, dtype=float)
    if len(w) != len(operators) or len(w) == 0:
        raise InputError("weights and operators must have the same non-zero length")
    if np.any(w <= 0):
        raise InputError("weights must be positive")
    if abs(w.sum() - 1.0) > 1e-12:
        raise WeightsNotNormalized(f"weights sum to {w.sum():.17g}, not 1")
    require_spectra_within(operators, m, M)
    mean = SymMatrix.symmetrized(sum(wi * A.entries for wi, A in zip(w, operators)))
    return w, mean


def jensen_upper(f, weights, operators, m, M, rel_tol: float = DEFAULT_REL_TOL) -> InequalityReport:
    """sum w_i f(A_i) <= K(m, M, f) f(sum w_i A_i) for positive operator convex f."""
    if not f.flags.operator_convex:
        raise FlagMissing(f"{f} is not flagged operator convex")
    w, mean = _weighted_inputs(weights, operators, m, M)
    K = big_K(m, M, f)
    lhs = SymMatrix.symmetrized(sum(wi * apply_function(f, A).entries for wi, A in zip(w, operators)))
    rhs = K.value * apply_function(f, mean)
    return InequalityReport(
        "jensen_upper",
        None,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        constants={"K": K.to_dict()},
        digest=input_digest("jensen_upper", f.to_spec(), list(w), *operators, m, M),
    )


def jensen_lower(f, weights, operators, m, M, rel_tol: float = DEFAULT_REL_TOL) -> InequalityReport:
    """k(m, M, f) f(sum w_i A_i) <= sum w_i f(A_i) for positive operator concave f."""
    if not f.flags.operator_concave:
        raise FlagMissing(f"{f} is not flagged operator concave")
    w, mean = _weighted_inputs(weights, operators, m, M)
    k = small_k(m, M, f)
    lhs = k.value * apply_function(f, mean)
    rhs = SymMatrix.symmetrized(sum(wi * apply_function(f, A).entries for wi, A in zip(w, operators)))
    return InequalityReport(
        "jensen_lower",
        None,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        constants={"k": k.to_dict()},
        digest=input_digest("jensen_lower", f.to_spec(), list(w), *operators, m, M),
    )
