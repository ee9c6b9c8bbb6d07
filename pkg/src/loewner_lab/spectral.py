"""Real symmetric matrices, Jacobi eigendecomposition and functional calculus.

Everything here treats a real symmetric matrix as a self-adjoint operator.
``apply_function`` realizes f(A) = V f(diag(lambda)) V^T and
``loewner_compare`` classifies A - B in the Loewner order with an explicit
relative tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainViolation,
    InputError,
    NonConvergence,
    NonFinite,
    NotSymmetric,
)

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 64
SYMMETRY_REL_TOL = 1e-12
DEFAULT_REL_TOL = 1e-9
# eigenvalues this close (relative to ||A||_F) are treated as one cluster
TIE_REL_TOL = 1e-12
# eigenvalues within this relative slack of a closed domain end are clipped
DOMAIN_REL_SLACK = 1e-12


# ---------------------------------------------------------------------------
# intervals and domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InputError("interval bounds must not be NaN")
        if lo > hi:
            raise InputError(f"interval requires lo <= hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, t: float) -> bool:
        return self.lo <= t <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def separation(self, other: "Interval") -> float:
        """Distance between the intervals, or minus the overlap depth."""
        return max(other.lo - self.hi, self.lo - other.hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def scaled(self, c: float) -> "Interval":
        a, b = c * self.lo, c * self.hi
        return Interval(min(a, b), max(a, b))

    def to_list(self) -> list[float]:
        return [self.lo, self.hi]

    @classmethod
    def from_list(cls, pair) -> "Interval":
        lo, hi = pair
        return cls(lo, hi)


@dataclass(frozen=True)
class Domain:
    """Real interval with optionally open or infinite ends."""

    lo: float = -math.inf
    hi: float = math.inf
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, t) -> np.ndarray | bool:
        t = np.asarray(t, dtype=float)
        above = t > self.lo if self.lo_open else t >= self.lo
        below = t < self.hi if self.hi_open else t <= self.hi
        out = above & below
        return bool(out) if out.ndim == 0 else out

    def covers(self, interval: Interval) -> bool:
        return bool(self.contains(interval.lo)) and bool(self.contains(interval.hi))

    def __str__(self) -> str:
        left = "(" if self.lo_open or math.isinf(self.lo) else "["
        right = ")" if self.hi_open or math.isinf(self.hi) else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


# ---------------------------------------------------------------------------
# Jacobi kernel
# ---------------------------------------------------------------------------


@njit(cache=True)
def _jacobi_kernel(a, tol_abs, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    sweeps = 0
    while True:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if math.sqrt(off) <= tol_abs:
            return np.diag(a).copy(), v, sweeps, True
        if sweeps == max_sweeps:
            return np.diag(a).copy(), v, sweeps, False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = sgn / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
        sweeps += 1


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


class SymMatrix:
    """Immutable real symmetric matrix.

    Input is symmetrized as (M + M^T)/2; the removed asymmetry is kept in
    ``asymmetry_residual`` and must not exceed 1e-12 * max|entry|.
    """

    __slots__ = ("_a", "asymmetry_residual", "_decomposition")

    def __init__(self, entries, *, check: bool = True):
        a = np.array(entries, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFinite("matrix entries must be finite")
        residual = float(np.max(np.abs(a - a.T))) / 2.0
        if check:
            scale = float(np.max(np.abs(a)))
            if residual > SYMMETRY_REL_TOL * scale:
                raise NotSymmetric(
                    f"asymmetry residual {residual:.3g} exceeds {SYMMETRY_REL_TOL:g} * max|entry|"
                )
        if residual:
            a = (a + a.T) / 2.0
        a.flags.writeable = False
        self._a = a
        self.asymmetry_residual = residual
        self._decomposition = None

    @classmethod
    def symmetrized(cls, entries) -> "SymMatrix":
        """Wrap an internally computed, mathematically symmetric result."""
        return cls(entries, check=False)

    @classmethod
    def identity(cls, dim: int, scale: float = 1.0) -> "SymMatrix":
        return cls(scale * np.eye(dim))

    @classmethod
    def diag(cls, values) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self._a))

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def _same_dim(self, other: "SymMatrix"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        self._same_dim(other)
        return SymMatrix.symmetrized(self._a + other._a)

    def __sub__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        self._same_dim(other)
        return SymMatrix.symmetrized(self._a - other._a)

    def __mul__(self, c):
        if isinstance(c, SymMatrix):
            return NotImplemented
        return SymMatrix.symmetrized(float(c) * self._a)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return SymMatrix.symmetrized(self._a / float(c))

    def __neg__(self):
        return SymMatrix.symmetrized(-self._a)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def allclose(self, other, rtol=1e-9, atol=0.0) -> bool:
        return bool(np.allclose(self._a, np.asarray(other, dtype=float), rtol=rtol, atol=atol))

    def to_list(self) -> list[list[float]]:
        return self._a.tolist()

    def __repr__(self) -> str:
        return f"SymMatrix({self._a.tolist()!r})"


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_norm: float
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def _reorthonormalize_ties(w: np.ndarray, v: np.ndarray, scale: float) -> np.ndarray:
    tie = TIE_REL_TOL * max(scale, np.finfo(float).tiny)
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= tie:
            stop += 1
        if stop - start > 1:
            q, r = np.linalg.qr(v[:, start:stop])
            v[:, start:stop] = q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))
        start = stop
    return v


def eigen_decompose(A: SymMatrix) -> SpectralDecomposition:
    """Cyclic Jacobi eigendecomposition with eigenvalues sorted ascending.

    The result is cached on ``A`` (matrices are immutable).
    """
    cached = A._decomposition
    if cached is not None:
        return cached
    a = A.entries
    norm = A.frobenius
    w, v, sweeps, ok = _jacobi_kernel(np.ascontiguousarray(a), JACOBI_REL_TOL * norm, JACOBI_MAX_SWEEPS)
    if not ok:
        raise NonConvergence(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (dim={A.dim}, norm={norm:.3g})"
        )
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    v = _reorthonormalize_ties(w, v, norm)
    w.flags.writeable = False
    v.flags.writeable = False
    dec = SpectralDecomposition(w, v, norm, sweeps)
    A._decomposition = dec
    return dec


def spectral_interval(A: SymMatrix) -> Interval:
    """Smallest closed interval containing the spectrum of A."""
    w = eigen_decompose(A).eigenvalues
    return Interval(w[0], w[-1])


def lambda_min(A: SymMatrix) -> float:
    return float(eigen_decompose(A).eigenvalues[0])


def lambda_max(A: SymMatrix) -> float:
    return float(eigen_decompose(A).eigenvalues[-1])


def check_spectrum_in_domain(w: np.ndarray, domain: Domain, scale: float, what: str = "matrix") -> np.ndarray:
    """Return eigenvalues clipped onto closed domain ends, or raise DomainViolation."""
    slack = DOMAIN_REL_SLACK * scale
    w = np.array(w, dtype=float)
    if math.isfinite(domain.lo):
        if domain.lo_open:
            bad = w <= domain.lo + slack
        else:
            bad = w < domain.lo - slack
        if bad.any():
            raise DomainViolation(
                f"{what} has eigenvalue {w[bad].min():.6g} outside domain {domain}"
            )
        if not domain.lo_open:
            w = np.maximum(w, domain.lo)
    if math.isfinite(domain.hi):
        if domain.hi_open:
            bad = w >= domain.hi - slack
        else:
            bad = w > domain.hi + slack
        if bad.any():
            raise DomainViolation(
                f"{what} has eigenvalue {w[bad].max():.6g} outside domain {domain}"
            )
        if not domain.hi_open:
            w = np.minimum(w, domain.hi)
    return w


def apply_function(f, A: SymMatrix) -> SymMatrix:
    """f(A) via the spectral decomposition of A."""
    dec = eigen_decompose(A)
    w = check_spectrum_in_domain(dec.eigenvalues, f.domain, dec.source_norm)
    fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainViolation(f"{f} is not finite on the spectrum of the matrix")
    v = dec.eigenvectors
    return SymMatrix.symmetrized((v * fw) @ v.T)


def matrix_power(A: SymMatrix, r: float) -> SymMatrix:
    """A^r; non-negative integer exponents use repeated multiplication.

    The multiplication path keeps integer-valued inputs exact.
    """
    from .functions import power

    f = power(r)
    dec = eigen_decompose(A)
    check_spectrum_in_domain(dec.eigenvalues, f.domain, dec.source_norm)
    r = float(r)
    if r.is_integer() and r >= 0:
        return SymMatrix.symmetrized(np.linalg.matrix_power(A.entries, int(r)))
    return apply_function(f, A)


# ---------------------------------------------------------------------------
# Loewner order
# ---------------------------------------------------------------------------


class Relation(str, Enum):
    LESS_OR_EQUAL = "LessOrEqual"
    GREATER_OR_EQUAL = "GreaterOrEqual"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class LoewnerVerdict:
    relation: Relation
    min_eig_of_difference: float
    max_eig_of_difference: float
    tolerance_used: float
    difference_norm: float = 0.0  # ||A - B||_F

    @property
    def holds(self) -> bool:
        """True when the first operand dominates the second (A >= B)."""
        return self.relation in (Relation.GREATER_OR_EQUAL, Relation.EQUAL)

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "min_eig_of_difference": self.min_eig_of_difference,
            "max_eig_of_difference": self.max_eig_of_difference,
            "tolerance_used": self.tolerance_used,
            "difference_norm": self.difference_norm,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LoewnerVerdict":
        return cls(
            Relation(d["relation"]),
            float(d["min_eig_of_difference"]),
            float(d["max_eig_of_difference"]),
            float(d["tolerance_used"]),
            float(d.get("difference_norm", 0.0)),
        )


def loewner_compare(A: SymMatrix, B: SymMatrix, rel_tol: float = DEFAULT_REL_TOL) -> LoewnerVerdict:
    """Classify A - B: >= 0, <= 0, both (Equal) or neither."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimension {A.dim} vs {B.dim}")
    if rel_tol < 0:
        raise InputError("rel_tol must be non-negative")
    D = A - B
    w = eigen_decompose(D).eigenvalues
    lo, hi = float(w[0]), float(w[-1])
    norm = D.frobenius
    tol = rel_tol * max(1.0, norm)
    ge = lo >= -tol
    le = hi <= tol
    if ge and le:
        rel = Relation.EQUAL
    elif ge:
        rel = Relation.GREATER_OR_EQUAL
    elif le:
        rel = Relation.LESS_OR_EQUAL
    else:
        rel = Relation.INCOMPARABLE
    return LoewnerVerdict(rel, lo, hi, tol, norm)
