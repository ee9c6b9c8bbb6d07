"""Seeded instance generation, counterexample hunts and satisfiability probes.

Randomness comes from numpy's counter-based Philox generator.  Trial ``i``
of a run with seed ``s`` draws from the substream keyed by (s, i), so any
single trial can be replayed without re-running the others.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleConstruction, InputError, UnknownChecker, UnknownCondition, WeightOutOfRange
from .functions import ScalarFunction, power
from .hypotheses import (
    hh_condition,
    operator_bounds,
    sandwich_margin_array,
    thm1_condition,
    thm1_margin_array,
    thm2_margin_array,
)
from .inequalities import CHECKERS, canonical_checker_id
from .spectral import Interval, SymMatrix

SEED_MASK = (1 << 64) - 1
# substream tags, so generators for different purposes never share a stream
_TRIAL, _PROBE, _PAIR = 1, 2, 3
VIOLATION_REL = 1e-8
MIN_WIDTH, MAX_WIDTH = 0.5, 1.5  # interval widths for conforming pairs, in units of `base`
MAX_SPREAD = 100.0
PROBE_RANGE = (1e-2, 1e2)
THM2_V_RANGE = (1.0, 10.0)
MAX_RECORDED = 50


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox stream for (seed, key...)."""
    ss = np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class GeneratorSpec:
    dim: int
    spectrum_interval: Interval
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be >= 1")
        if self.count < 1:
            raise InputError("count must be >= 1")
        if not self.spectrum_interval.lo > 0:
            raise InputError("spectrum interval must lie in (0, inf)")


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Q from the QR factorization of a standard normal matrix (signs fixed by R)."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def planted(dim: int, interval: Interval, rng: np.random.Generator) -> tuple[SymMatrix, np.ndarray]:
    """Q diag(lam) Q^T with lam uniform on the interval; returns the matrix and sorted lam."""
    lam = rng.uniform(interval.lo, interval.hi, dim)
    q = random_orthogonal(dim, rng)
    if interval.lo == interval.hi:
        return SymMatrix.identity(dim, interval.lo), np.full(dim, interval.lo)
    return SymMatrix.symmetrized((q * lam) @ q.T), np.sort(lam)


def random_symmetric_with_spectrum(spec: GeneratorSpec) -> list[SymMatrix]:
    return [planted(spec.dim, spec.spectrum_interval, substream(spec.seed, _TRIAL, i))[0] for i in range(spec.count)]


# ---------------------------------------------------------------------------
# conforming pairs
# ---------------------------------------------------------------------------


def _required_m(n, w1, w2, v, gap):
    # (1-v)n + vm > N + gap   and   (1-v)N + vM < m - gap, with N = n+w1, M = m+w2
    N = n + w1
    return max(n + (w1 + gap) / v, N + (v * w2 + gap) / (1.0 - v))


def _conforming_pair(v, gap, dim, rng, base=1.0, max_spread=MAX_SPREAD):
    if not 0.0 < v < 1.0:
        raise WeightOutOfRange(f"weight must lie in (0, 1), got {v}")
    if not gap > 0:
        raise InputError("gap must be positive")
    n = float(base)
    lo_w, hi_w = MIN_WIDTH * n, MAX_WIDTH * n
    m_min = _required_m(n, lo_w, lo_w, v, gap)
    if m_min + lo_w > max_spread * n:
        raise InfeasibleConstruction(
            f"v={v:g}, gap={gap:g}: even widths {lo_w:g} need m >= n + (w+gap)/v and "
            f"m >= N + (v w + gap)/(1-v), i.e. M >= {m_min + lo_w:.6g} > {max_spread:g} n"
        )
    w1, w2 = rng.uniform(lo_w, hi_w, 2)
    extra = rng.uniform(0.0, n)
    m = _required_m(n, w1, w2, v, gap) + extra + 1e-9 * n
    if m + w2 > max_spread * n:
        w1 = w2 = lo_w
        m = m_min + 1e-9 * n
    nN, mM = Interval(n, n + w1), Interval(m, m + w2)
    A, _ = planted(dim, nN, rng)
    B, _ = planted(dim, mM, rng)
    return A, B, nN, mM


def conforming_pair(v: float, gap: float, dim: int, seed: int, base: float = 1.0):
    """(A, B) whose spectral bounds satisfy the thm1 condition at weight v with margin >= gap."""
    A, B, nN, mM = _conforming_pair(v, gap, dim, substream(seed, _PAIR), base)
    hyp = thm1_condition(operator_bounds(A), operator_bounds(B), v)
    if not hyp.holds:  # pragma: no cover - guaranteed by the placement algebra
        raise InfeasibleConstruction(f"constructed pair failed the condition (margin {hyp.margin:.3g})")
    return A, B


# ---------------------------------------------------------------------------
# hunts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    trial: int
    digest: str
    margin: float
    relative_margin: float
    replay: dict

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class HuntResult:
    checker: str
    function: dict | None
    seed: int
    trials: int
    tested: int = 0
    satisfying_hypothesis_count: int = 0
    errors: int = 0
    violations: list = field(default_factory=list)
    violation_count: int = 0
    violations_under_hypothesis: int = 0
    worst_margin: float = math.inf
    worst_relative_margin: float = math.inf
    params: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["violations"] = [x.to_dict() for x in self.violations]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


SEPARATED = {"thm1", "subadditivity_double", "power", "hh_chain"}


def _instance(cid, f, spec, params, require, rng):
    dim, interval = spec.dim, spec.spectrum_interval
    if cid == "ell_sum":
        return [planted(dim, interval, rng)[0] for _ in range(int(params.get("ell", 3)))], None
    if cid == "inner_jensen":
        A = planted(dim, interval, rng)[0]
        x = rng.standard_normal(dim)
        return A, x / np.linalg.norm(x)
    if require and cid in SEPARATED:
        v = float(params.get("v", 0.5)) if cid == "thm1" else 0.5
        gap = float(params.get("gap", 0.1 * interval.lo))
        A, B, _, _ = _conforming_pair(v, gap, dim, rng, base=interval.lo)
        return A, B
    return planted(dim, interval, rng)[0], planted(dim, interval, rng)[0]


def _run_checker(cid, f, inst, params):
    a, b = inst
    if cid == "thm1":
        return CHECKERS[cid](f, a, b, float(params.get("v", 0.5)))
    if cid == "thm2":
        return CHECKERS[cid](f, a, b, float(params.get("v", 2.0)))
    if cid == "power":
        r = params.get("r", f.r if f is not None else None)
        if r is None:
            raise UnknownChecker("power hunts need r (or a power-family function)")
        return CHECKERS[cid](float(r), a, b)
    if cid == "ell_sum":
        return CHECKERS[cid](f, a, params.get("m"), params.get("M"), params.get("mode", "concave_lower"))
    if cid == "inner_jensen":
        return CHECKERS[cid](f, a, b, params.get("m"), params.get("M"))
    if cid in ("reverse_subadditivity", "concave_lower", "K_k_subadditivity"):
        return CHECKERS[cid](f, a, b, params.get("m"), params.get("M"))
    return CHECKERS[cid](f, a, b)


def _margins(report):
    """(raw margin, relative margin, violated) for a report."""
    if hasattr(report, "checks"):
        # scalar report: the literally printed concave reverse is a diagnostic, not a claim
        claimed = [c for c in report.checks if c.label != "f(<Ax,x>) <= k <f(A)x,x>"]
        raw = min((c.margin for c in claimed), default=math.inf)
        rel = min((c.margin / max(abs(c.lhs), abs(c.rhs), 1e-300) for c in claimed), default=math.inf)
        return raw, rel, rel < -VIOLATION_REL
    verdicts = [link.verdict for link in report.chain_links] or [report.verdict]
    raw = min(v.min_eig_of_difference for v in verdicts)
    rel = min(v.min_eig_of_difference / max(v.difference_norm, 1e-300) for v in verdicts)
    violated = any(v.min_eig_of_difference < -VIOLATION_REL * v.difference_norm for v in verdicts)
    return raw, rel, violated


def _replay_dict(cid, f, inst, params):
    a, b = inst
    out = {"checker": cid, "f": None if f is None else f.to_spec(), "params": params}
    if cid == "ell_sum":
        out["operators"] = [X.to_list() for X in a]
    elif cid == "inner_jensen":
        out["A"], out["x"] = a.to_list(), list(map(float, b))
    else:
        out["A"], out["B"] = a.to_list(), b.to_list()
    return out


def hunt_violations(
    checker_id: str,
    f: ScalarFunction | None,
    spec: GeneratorSpec,
    require_hypothesis: bool,
    params: dict | None = None,
) -> HuntResult:
    """Run ``spec.count`` seeded trials of a checker and collect violations.

    With ``require_hypothesis`` the separated-spectra checkers get conforming
    pairs; any trial whose hypothesis still fails is not tested.  Without it
    both operators are drawn from the same spectrum interval.
    """
    cid = canonical_checker_id(checker_id)
    if cid not in CHECKERS:
        raise UnknownChecker(f"unknown checker {checker_id!r}; known: {sorted(CHECKERS)}")
    params = dict(params or {})
    if cid == "power" and f is None:
        f = power(float(params["r"])) if "r" in params else None
    result = HuntResult(cid, None if f is None else f.to_spec(), spec.seed, spec.count, params=params)
    for i in range(spec.count):
        rng = substream(spec.seed, _TRIAL, i)
        inst = _instance(cid, f, spec, params, require_hypothesis, rng)
        try:
            report = _run_checker(cid, f, inst, params)
        except InputError as exc:
            result.errors += 1
            if len(result.notes) < 5:
                result.notes.append(f"trial {i}: {type(exc).__name__}: {exc}")
            continue
        held = getattr(report, "hypothesis_held", None)
        satisfied = held is None or held
        if satisfied:
            result.satisfying_hypothesis_count += 1
        elif require_hypothesis:
            continue
        result.tested += 1
        raw, rel, violated = _margins(report)
        result.worst_relative_margin = min(result.worst_relative_margin, rel)
        if violated:
            result.violation_count += 1
            result.violations_under_hypothesis += int(satisfied)
            result.worst_margin = min(result.worst_margin, raw)
            if len(result.violations) < MAX_RECORDED:
                replay = _replay_dict(cid, f, inst, params)
                digest = hashlib.sha256(json.dumps(replay, sort_keys=True).encode()).hexdigest()[:16]
                result.violations.append(Violation(i, digest, raw, rel, replay))
    return result


def replay_violation(replay: dict):
    """Re-run the checker on a recorded violation."""
    from .functions import from_spec

    cid = replay["checker"]
    f = None if replay["f"] is None else from_spec(replay["f"])
    if cid == "ell_sum":
        inst = ([SymMatrix(X) for X in replay["operators"]], None)
    elif cid == "inner_jensen":
        inst = (SymMatrix(replay["A"]), np.array(replay["x"]))
    else:
        inst = (SymMatrix(replay["A"]), SymMatrix(replay["B"]))
    return _run_checker(cid, f, inst, replay.get("params", {}))


# ---------------------------------------------------------------------------
# satisfiability probes
# ---------------------------------------------------------------------------

CONDITIONS = ("thm1", "thm2", "hh", "sandwich")


def probe_hypothesis_satisfiability(condition_id: str, samples: int, seed: int = 0, grid: int = 99) -> HuntResult:
    """Count random (n, N, m, M, v) tuples that satisfy a spectral condition.

    Bounds are log-uniform on [1e-2, 1e2] with n < N and m < M.
    """
    if condition_id not in CONDITIONS:
        raise UnknownCondition(f"unknown condition {condition_id!r}; known: {list(CONDITIONS)}")
    if samples < 1:
        raise InputError("samples must be >= 1")
    rng = substream(seed, _PROBE, CONDITIONS.index(condition_id))
    x = np.exp(rng.uniform(math.log(PROBE_RANGE[0]), math.log(PROBE_RANGE[1]), (samples, 4)))
    n, N = np.sort(x[:, :2], axis=1).T
    m, M = np.sort(x[:, 2:], axis=1).T
    v = None
    if condition_id == "thm1":
        v = rng.uniform(np.nextafter(0.0, 1.0), 1.0, samples)
        ok = thm1_margin_array(n, N, m, M, v) >= 0
    elif condition_id == "thm2":
        v = rng.uniform(*THM2_V_RANGE, samples)
        ok = (thm2_margin_array(n, N, m, M, v) >= 0) & (n < N)
    elif condition_id == "sandwich":
        ok = sandwich_margin_array(m, n, N, M) >= 0
    else:
        ok = n < N
        for vi in np.arange(1, grid + 1) / (grid + 1):
            ok &= thm1_margin_array(n, N, m, M, vi) >= 0
        grid_passes = int(ok.sum())
        for j in np.flatnonzero(ok):
            ok[j] = hh_condition(Interval(n[j], N[j]), Interval(m[j], M[j]), grid).holds
    result = HuntResult(f"probe:{condition_id}", None, seed, samples, tested=samples)
    result.satisfying_hypothesis_count = int(ok.sum())
    result.params = {"range": list(PROBE_RANGE), "grid": grid if condition_id == "hh" else None}
    if condition_id == "hh":
        result.notes.append(f"{grid_passes} tuples pass every grid point but fail as v -> 0 or v -> 1")
    for j in np.flatnonzero(ok)[:5]:
        w = {"n": float(n[j]), "N": float(N[j]), "m": float(m[j]), "M": float(M[j])}
        if v is not None:
            w["v"] = float(v[j])
        result.witnesses.append(w)
    return result
