"""One checker per operator inequality.

Checkers evaluate the conclusion even when the hypothesis fails, so failed
hypothesis / failed conclusion pairs stay observable.  The exceptions are
the constant-based checkers, whose constants are only defined once the
sandwich condition holds; they raise HypothesisFailed instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import big_K, require_spectra_within, small_k
from .errors import (
    DimensionMismatch,
    FlagMissing,
    HypothesisFailed,
    InputError,
    NotStrictlyPositive,
    NotUnitVector,
    ZeroValueViolation,
)
from .functions import ScalarFunction, evaluate
from .hypotheses import (
    ell_sandwich_condition,
    hh_condition,
    operator_bounds,
    power_condition,
    thm1_condition,
    thm2_condition,
)
from .means import arithmetic_mean, geometric_mean, hh_integral_mean
from .reports import ChainLink, InequalityReport, input_digest
from .spectral import (
    DEFAULT_REL_TOL,
    Interval,
    SymMatrix,
    apply_function,
    check_spectrum_in_domain,
    eigen_decompose,
    loewner_compare,
    matrix_power,
    spectral_interval,
)

STRICT_POSITIVITY_REL = 1e-10


def _require_strictly_positive(*ops: SymMatrix):
    for i, X in enumerate(ops):
        lam = eigen_decompose(X).eigenvalues[0]
        if not lam > STRICT_POSITIVITY_REL * X.frobenius:
            raise NotStrictlyPositive(f"operand {i} is not strictly positive (lambda_min = {lam:.6g})")


def _same_dim(*ops: SymMatrix):
    if len({X.dim for X in ops}) > 1:
        raise DimensionMismatch(f"operands have dimensions {[X.dim for X in ops]}")


def _convexity_direction(f: ScalarFunction) -> str:
    if f.flags.convex_on_domain:
        return "convex"
    if f.flags.concave_on_domain:
        return "concave"
    raise FlagMissing(f"{f} is flagged neither convex nor concave")


def _link(label: str, lhs: SymMatrix, rhs: SymMatrix, rel_tol: float) -> ChainLink:
    return ChainLink(label, loewner_compare(rhs, lhs, rel_tol))


def _hull_bounds(ops) -> Interval:
    tau = operator_bounds(ops[0])
    for X in ops[1:]:
        tau = tau.hull(operator_bounds(X))
    return tau


# ---------------------------------------------------------------------------
# convexity under separated spectra
# ---------------------------------------------------------------------------


def check_thm1(f, A, B, v=0.5, bounds_override=None, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """f(A mean_v B) <= f(A) mean_v f(B) for convex f (reversed for concave f)."""
    _same_dim(A, B)
    direction = _convexity_direction(f)
    nN, mM = bounds_override or (operator_bounds(A), operator_bounds(B))
    hyp = thm1_condition(nN, mM, v)
    f_mean = apply_function(f, arithmetic_mean(A, B, v))
    mean_f = arithmetic_mean(apply_function(f, A), apply_function(f, B), v)
    lhs, rhs = (f_mean, mean_f) if direction == "convex" else (mean_f, f_mean)
    return InequalityReport(
        "thm1",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        notes=f"{direction} direction, v={v:g}",
        digest=input_digest("thm1", f.to_spec(), A, B, v),
    )


def check_thm2(f, A, B, v, bounds_override=None, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """The same inequality for v >= 1, under the containment/disjointness condition."""
    _same_dim(A, B)
    direction = _convexity_direction(f)
    nN, mM = bounds_override or (operator_bounds(A), operator_bounds(B))
    hyp = thm2_condition(nN, mM, v)
    f_mean = apply_function(f, arithmetic_mean(A, B, v))
    mean_f = arithmetic_mean(apply_function(f, A), apply_function(f, B), v)
    lhs, rhs = (f_mean, mean_f) if direction == "convex" else (mean_f, f_mean)
    return InequalityReport(
        "thm2",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        notes=f"{direction} direction, v={v:g}",
        digest=input_digest("thm2", f.to_spec(), A, B, v),
    )


def check_subadditivity_double(f, A, B, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """2 f(A+B) <= f(2A) + f(2B); also f(A+B) <= f(A) + f(B) when f(2t) <= 2 f(t)."""
    _same_dim(A, B)
    if not f.flags.convex_on_domain:
        raise FlagMissing(f"{f} is not flagged convex")
    A2, B2 = 2.0 * A, 2.0 * B
    hyp = thm1_condition(operator_bounds(A2), operator_bounds(B2), 0.5)
    f_sum = apply_function(f, A + B)
    lhs = 2.0 * f_sum
    rhs = apply_function(f, A2) + apply_function(f, B2)
    links = [_link("2f(A+B) <= f(2A)+f(2B)", lhs, rhs, rel_tol)]
    if f.flags.doubling:
        links.append(_link("f(A+B) <= f(A)+f(B)", f_sum, apply_function(f, A) + apply_function(f, B), rel_tol))
    return InequalityReport(
        "subadditivity_double",
        hyp,
        lhs,
        rhs,
        links[0].verdict,
        tuple(links),
        notes="doubling link included" if f.flags.doubling else "f not flagged doubling",
        digest=input_digest("subadditivity_double", f.to_spec(), A, B),
    )


def check_power(r, A, B, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """2^(1-r) (A+B)^r <= A^r + B^r for r > 1 or r < 0; reversed for r in [0, 1]."""
    _same_dim(A, B)
    r = float(r)
    if r < 0 or not r.is_integer():
        _require_strictly_positive(A, B)
    hyp = power_condition(A, B)
    scaled = 2.0 ** (1.0 - r) * matrix_power(A + B, r)
    summed = matrix_power(A, r) + matrix_power(B, r)
    if r > 1 or r < 0:
        lhs, rhs, label = scaled, summed, "2^(1-r)(A+B)^r <= A^r+B^r"
    else:
        lhs, rhs, label = summed, scaled, "A^r+B^r <= 2^(1-r)(A+B)^r"
    return InequalityReport(
        "power",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        notes=f"r={r:g}: {label}",
        constants={"r": r},
        digest=input_digest("power", r, A, B),
    )


def check_hh_chain(f, A, B, panels=8, nodes=16, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """f((A+B)/2) <= integral_0^1 f((1-v)A + vB) dv <= (f(A) + f(B))/2."""
    _same_dim(A, B)
    if not f.flags.convex_on_domain:
        raise FlagMissing(f"{f} is not flagged convex")
    hyp = hh_condition(operator_bounds(A), operator_bounds(B))
    integral = hh_integral_mean(f, A, B, panels=panels, nodes=nodes)
    mid = apply_function(f, arithmetic_mean(A, B, 0.5))
    avg = arithmetic_mean(apply_function(f, A), apply_function(f, B), 0.5)
    links = (
        _link("f((A+B)/2) <= integral", mid, integral.value, rel_tol),
        _link("integral <= (f(A)+f(B))/2", integral.value, avg, rel_tol),
    )
    notes = (
        "hypothesis decided over all v in (0,1); with n<N or m<M it cannot hold "
        "(the mean interval tends to [n,N] as v->0)"
    )
    return InequalityReport(
        "hh_chain",
        hyp,
        mid,
        avg,
        loewner_compare(avg, mid, rel_tol),
        links,
        notes=notes,
        constants={
            "integral": integral.value.to_list(),
            "refinement_delta": integral.refinement_delta,
            "panels": panels,
            "nodes": nodes,
        },
        digest=input_digest("hh_chain", f.to_spec(), A, B, panels, nodes),
    )


# ---------------------------------------------------------------------------
# operator monotone decreasing / concave functions
# ---------------------------------------------------------------------------


def check_decreasing_chain(f, A, B, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """2f(A+B) <= 2f(A mean B) <= 2 f(A) gmean f(B) <= f(A) + f(B)."""
    _same_dim(A, B)
    if not f.flags.operator_monotone_decreasing:
        raise FlagMissing(f"{f} is not flagged operator monotone decreasing")
    _require_strictly_positive(A, B)
    fA, fB = apply_function(f, A), apply_function(f, B)
    t1 = 2.0 * apply_function(f, A + B)
    t2 = 2.0 * apply_function(f, arithmetic_mean(A, B, 0.5))
    t3 = 2.0 * geometric_mean(fA, fB, 0.5)
    t4 = fA + fB
    links = (
        _link("2f(A+B) <= 2f(A mean B)", t1, t2, rel_tol),
        _link("2f(A mean B) <= 2(f(A) gmean f(B))", t2, t3, rel_tol),
        _link("2(f(A) gmean f(B)) <= f(A)+f(B)", t3, t4, rel_tol),
    )
    return InequalityReport(
        "decreasing_chain",
        None,
        t1,
        t4,
        loewner_compare(t4, t1, rel_tol),
        links,
        notes="end-to-end verdict is 2f(A+B) <= f(A)+f(B)",
        digest=input_digest("decreasing_chain", f.to_spec(), A, B),
    )


def _auto_sandwich(ops, m, M, ell):
    nN = _hull_bounds(ops)
    if m is None:
        m = ell * nN.lo
    if M is None:
        M = ell * nN.hi
    hyp = ell_sandwich_condition(m, nN, M, ell)
    if not hyp.holds:
        raise HypothesisFailed(
            f"need 0 < m <= {ell}n <= {ell}N <= M; got m={m:.6g}, n={nN.lo:.6g}, N={nN.hi:.6g}, M={M:.6g}"
        )
    return float(m), float(M), hyp


def check_reverse_subadditivity(f, A, B, m=None, M=None, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """f(A) + f(B) <= 4 K(m, M, f) f(A+B) for operator monotone decreasing f."""
    _same_dim(A, B)
    if not f.flags.operator_monotone_decreasing:
        raise FlagMissing(f"{f} is not flagged operator monotone decreasing")
    m, M, hyp = _auto_sandwich([A, B], m, M, 2)
    K = big_K(m, M, f)
    lhs = apply_function(f, A) + apply_function(f, B)
    rhs = (4.0 * K.value) * apply_function(f, A + B)
    return InequalityReport(
        "reverse_subadditivity",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        constants={"K": K.to_dict()},
        digest=input_digest("reverse_subadditivity", f.to_spec(), A, B, m, M),
    )


def check_concave_lower(f, A, B, m=None, M=None, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """k(m, M, f) f(A+B) <= f(A) + f(B) for operator concave f."""
    _same_dim(A, B)
    if not f.flags.operator_concave:
        raise FlagMissing(f"{f} is not flagged operator concave")
    m, M, hyp = _auto_sandwich([A, B], m, M, 2)
    k = small_k(m, M, f)
    lhs = k.value * apply_function(f, A + B)
    rhs = apply_function(f, A) + apply_function(f, B)
    return InequalityReport(
        "concave_lower",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        constants={"k": k.to_dict()},
        digest=input_digest("concave_lower", f.to_spec(), A, B, m, M),
    )


def check_ell_sum(f, operators, m=None, M=None, mode="concave_lower", rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """l-term versions: f(sum A_i) <= (1/k) sum f(A_i), or (1/(l^2 K)) sum f(A_i) <= f(sum A_i)."""
    ops = list(operators)
    if not ops:
        raise InputError("need at least one operator")
    _same_dim(*ops)
    ell = len(ops)
    if mode == "concave_lower":
        if not f.flags.operator_concave:
            raise FlagMissing(f"{f} is not flagged operator concave")
    elif mode == "decreasing_upper":
        if not f.flags.operator_monotone_decreasing:
            raise FlagMissing(f"{f} is not flagged operator monotone decreasing")
    else:
        raise InputError(f"unknown mode {mode!r}; use concave_lower or decreasing_upper")
    m, M, hyp = _auto_sandwich(ops, m, M, ell)
    total = SymMatrix.symmetrized(sum(X.entries for X in ops))
    f_total = apply_function(f, total)
    sum_f = SymMatrix.symmetrized(sum(apply_function(f, X).entries for X in ops))
    if mode == "concave_lower":
        c = small_k(m, M, f)
        lhs, rhs = f_total, (1.0 / c.value) * sum_f
        constants = {"k": c.to_dict()}
    else:
        c = big_K(m, M, f)
        lhs, rhs = (1.0 / (ell * ell * c.value)) * sum_f, f_total
        constants = {"K": c.to_dict()}
    return InequalityReport(
        f"ell_sum_{mode}",
        hyp,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        notes=f"ell={ell}",
        constants=constants,
        digest=input_digest("ell_sum", mode, f.to_spec(), *ops, m, M),
    )


# ---------------------------------------------------------------------------
# convex / concave subadditivity with ratio constants
# ---------------------------------------------------------------------------

DOMAIN_NOTE = (
    "f(A+B) needs f on [2m, 2M] while the constant is taken on [m, M]; "
    "domain(f) was required to contain [0, 2M]"
)


def check_K_k_subadditivity(f, A, B, m=None, M=None, rel_tol=DEFAULT_REL_TOL) -> InequalityReport:
    """f(A)+f(B) <= K f(A+B) for convex f with f(0)=0; f(A)+f(B) >= k f(A+B) for concave f."""
    _same_dim(A, B)
    convex, concave = f.flags.convex_on_domain, f.flags.concave_on_domain
    if not (convex or concave):
        raise FlagMissing(f"{f} is flagged neither convex nor concave")
    tau = _hull_bounds([A, B])
    m = tau.lo if m is None else float(m)
    M = tau.hi if M is None else float(M)
    require_spectra_within([A, B], m, M)
    check_spectrum_in_domain(np.array([0.0, 2.0 * M]), f.domain, 2.0 * M, "interval [0, 2M]")
    if convex and f.value_at_zero != 0:
        raise ZeroValueViolation(f"convex branch needs f(0) = 0, {f} has f(0) = {f.value_at_zero}")
    if concave and not convex and (f.value_at_zero is None or f.value_at_zero < 0):
        raise ZeroValueViolation(f"concave branch needs f(0) >= 0, {f} has f(0) = {f.value_at_zero}")
    fA, fB = apply_function(f, A), apply_function(f, B)
    f_sum = apply_function(f, A + B)
    links, constants = [], {}
    if convex:
        K = big_K(m, M, f)
        constants["K"] = K.to_dict()
        links.append(_link("f(A)+f(B) <= K f(A+B)", fA + fB, K.value * f_sum, rel_tol))
    if concave:
        k = small_k(m, M, f)
        constants["k"] = k.to_dict()
        links.append(_link("k f(A+B) <= f(A)+f(B)", k.value * f_sum, fA + fB, rel_tol))
    if convex:
        lhs, rhs = fA + fB, K.value * f_sum
    else:
        lhs, rhs = k.value * f_sum, fA + fB
    return InequalityReport(
        "K_k_subadditivity",
        None,
        lhs,
        rhs,
        loewner_compare(rhs, lhs, rel_tol),
        tuple(links),
        notes=DOMAIN_NOTE,
        constants=constants,
        digest=input_digest("K_k_subadditivity", f.to_spec(), A, B, m, M),
    )


@dataclass(frozen=True)
class ScalarCheck:
    label: str
    lhs: float
    rhs: float
    holds: bool
    equal: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {**self.__dict__, "margin": self.margin}


@dataclass(frozen=True)
class InnerJensenReport:
    function: str
    quadratic_form: float  # <Ax, x>
    f_of_form: float  # f(<Ax, x>)
    form_of_f: float  # <f(A)x, x>
    m: float
    M: float
    checks: tuple[ScalarCheck, ...]
    notes: str = ""

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["checks"] = [c.to_dict() for c in self.checks]
        return d


def _scalar(label, lhs, rhs, rel_tol):
    tol = rel_tol * max(1.0, abs(lhs), abs(rhs))
    return ScalarCheck(label, float(lhs), float(rhs), rhs - lhs >= -tol, abs(rhs - lhs) <= tol)


def check_inner_jensen(f, A, x, m=None, M=None, rel_tol=DEFAULT_REL_TOL) -> InnerJensenReport:
    """Jensen's inequality for <Ax, x> and its two ratio-constant reverses.

    For concave f both orientations of the reverse are evaluated: the one with
    k multiplying <f(A)x, x> and the one with k multiplying f(<Ax, x>).
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != A.dim:
        raise DimensionMismatch(f"vector length {x.shape[0]} vs matrix dimension {A.dim}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise NotUnitVector(f"||x|| = {np.linalg.norm(x):.17g}")
    convex, concave = f.flags.convex_on_domain, f.flags.concave_on_domain
    if not (convex or concave):
        raise FlagMissing(f"{f} is flagged neither convex nor concave")
    tau = spectral_interval(A)
    m = tau.lo if m is None else float(m)
    M = tau.hi if M is None else float(M)
    require_spectra_within([A], m, M)
    form = float(x @ A.entries @ x)
    f_form = evaluate(f, min(max(form, tau.lo), tau.hi))
    form_f = float(x @ apply_function(f, A).entries @ x)
    checks = []
    notes = []
    if convex:
        checks.append(_scalar("f(<Ax,x>) <= <f(A)x,x>", f_form, form_f, rel_tol))
    if concave:
        checks.append(_scalar("<f(A)x,x> <= f(<Ax,x>)", form_f, f_form, rel_tol))
    if m < M:
        if convex:
            K = big_K(m, M, f).value
            checks.append(_scalar("<f(A)x,x> <= K f(<Ax,x>)", form_f, K * f_form, rel_tol))
        if concave:
            k = small_k(m, M, f).value
            checks.append(_scalar("f(<Ax,x>) <= k <f(A)x,x>", f_form, k * form_f, rel_tol))
            checks.append(_scalar("k f(<Ax,x>) <= <f(A)x,x>", k * f_form, form_f, rel_tol))
    else:
        notes.append("m == M: ratio constants undefined, reverse inequalities skipped")
    return InnerJensenReport(f.name, form, f_form, form_f, m, M, tuple(checks), "; ".join(notes))


CHECKERS = {
    "thm1": check_thm1,
    "thm2": check_thm2,
    "subadditivity_double": check_subadditivity_double,
    "power": check_power,
    "hh_chain": check_hh_chain,
    "decreasing_chain": check_decreasing_chain,
    "reverse_subadditivity": check_reverse_subadditivity,
    "concave_lower": check_concave_lower,
    "ell_sum": check_ell_sum,
    "K_k_subadditivity": check_K_k_subadditivity,
    "inner_jensen": check_inner_jensen,
}


def canonical_checker_id(name: str) -> str:
    name = name.removeprefix("check_")
    if name == "hh":
        name = "hh_chain"
    return name
