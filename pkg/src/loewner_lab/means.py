"""Weighted operator means and the segment integral mean."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InputError, NotStrictlyPositive, QuadratureNotConverged
from .functions import ScalarFunction, power
from .spectral import SymMatrix, apply_function, check_spectrum_in_domain, eigen_decompose, spectral_interval

STRICT_POSITIVITY_REL = 1e-12
QUADRATURE_REL_TOL = 1e-8
DEFAULT_PANELS = 8
DEFAULT_NODES = 16


def arithmetic_mean(A: SymMatrix, B: SymMatrix, v: float) -> SymMatrix:
    """(1 - v) A + v B for any real weight v."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimension {A.dim} vs {B.dim}")
    v = float(v)
    return SymMatrix.symmetrized((1.0 - v) * A.entries + v * B.entries)


def _require_strictly_positive(X: SymMatrix, name: str):
    lam = eigen_decompose(X).eigenvalues[0]
    if not lam > X.dim * STRICT_POSITIVITY_REL * X.frobenius:
        raise NotStrictlyPositive(f"{name} is not strictly positive (lambda_min = {lam:.6g})")


def geometric_mean(A: SymMatrix, B: SymMatrix, v: float = 0.5) -> SymMatrix:
    """A^(1/2) (A^(-1/2) B A^(-1/2))^v A^(1/2), all roots by functional calculus."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimension {A.dim} vs {B.dim}")
    if not 0.0 <= v <= 1.0:
        raise InputError(f"geometric mean weight must lie in [0, 1], got {v}")
    _require_strictly_positive(A, "A")
    _require_strictly_positive(B, "B")
    half = apply_function(power(0.5), A).entries
    neg_half = apply_function(power(-0.5), A).entries
    inner = SymMatrix.symmetrized(neg_half @ B.entries @ neg_half)
    middle = apply_function(power(v), inner).entries
    return SymMatrix.symmetrized(half @ middle @ half)


@dataclass(frozen=True)
class IntegralMean:
    """Quadrature estimate of the integral of f((1-v)A + vB) over v in [0, 1]."""

    value: SymMatrix
    refined: SymMatrix
    refinement_delta: float  # ||refined - value||_F / max(1, ||refined||_F)
    panels: int
    nodes: int


def _composite_gauss_legendre(f, A, B, panels, nodes):
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = np.zeros((A.dim, A.dim))
    h = 1.0 / panels
    # fixed panel order: the sum is reproducible
    for k in range(panels):
        a = k * h
        for xi, wi in zip(x, w):
            v = a + 0.5 * h * (xi + 1.0)
            total += (0.5 * h * wi) * apply_function(f, arithmetic_mean(A, B, v)).entries
    return total


def hh_integral_mean(
    f: ScalarFunction,
    A: SymMatrix,
    B: SymMatrix,
    panels: int = DEFAULT_PANELS,
    nodes: int = DEFAULT_NODES,
    rel_tol: float = QUADRATURE_REL_TOL,
) -> IntegralMean:
    """Composite Gauss-Legendre integral of f along the segment from A to B.

    The estimate is repeated with twice the panels; a relative change above
    ``rel_tol`` raises QuadratureNotConverged.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimension {A.dim} vs {B.dim}")
    if panels < 1 or nodes < 1:
        raise InputError("panels and nodes must be positive")
    hull = spectral_interval(A).hull(spectral_interval(B))
    scale = max(A.frobenius, B.frobenius)
    check_spectrum_in_domain(np.array(hull.to_list()), f.domain, scale, "segment A -> B")
    coarse = _composite_gauss_legendre(f, A, B, panels, nodes)
    fine = _composite_gauss_legendre(f, A, B, 2 * panels, nodes)
    delta = float(np.linalg.norm(fine - coarse) / max(1.0, np.linalg.norm(fine)))
    if delta > rel_tol:
        raise QuadratureNotConverged(
            f"doubling panels changed the integral by {delta:.3g} (> {rel_tol:g})"
        )
    return IntegralMean(SymMatrix.symmetrized(coarse), SymMatrix.symmetrized(fine), delta, panels, nodes)
