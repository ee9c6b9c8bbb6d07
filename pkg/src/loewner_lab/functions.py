"""Built-in scalar functions with declared analytic flags.

Flags are fixed per family at construction.  Scalar convexity and
monotonicity can be spot-checked with :func:`audit_flags`; the operator
level flags (operator convex, operator monotone, ...) are trusted metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInterval, DomainViolation, InputError
from .spectral import Domain

POSITIVE_REALS = Domain(0.0, math.inf, lo_open=True)
NONNEGATIVE_REALS = Domain(0.0, math.inf)
REAL_LINE = Domain()


@dataclass(frozen=True)
class Flags:
    convex_on_domain: bool = False
    concave_on_domain: bool = False
    operator_monotone_increasing: bool = False
    operator_monotone_decreasing: bool = False
    operator_convex: bool = False
    operator_concave: bool = False
    doubling: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ScalarFunction:
    family: str
    params: tuple[float, ...]
    domain: Domain
    flags: Flags
    value_at_zero: float | None = None
    _impl: object = field(default=None, repr=False, compare=False)

    def __call__(self, t):
        return self._impl(np.asarray(t, dtype=float))

    @property
    def name(self) -> str:
        if self.family == "power":
            return f"t^{self.params[0]:g}"
        if self.family == "inverse_shift":
            s = self.params[0]
            return "1/t" if s == 0 else f"1/(t+{s:g})"
        if self.family == "affine":
            p, q = self.params
            return f"{p:g}*t+{q:g}"
        return self.family

    def __str__(self) -> str:
        return self.name

    def to_spec(self) -> dict:
        keys = {"power": ("r",), "inverse_shift": ("s",), "affine": ("p", "q")}.get(self.family, ())
        spec = {"family": self.family}
        spec.update({k: v for k, v in zip(keys, self.params)})
        return spec

    @property
    def r(self) -> float | None:
        return self.params[0] if self.family == "power" else None


def _power_impl(r: float):
    if r == 0:
        return lambda t: np.ones_like(t)
    if float(r).is_integer():
        k = int(r)
        return lambda t: t**k if k > 0 else 1.0 / t ** (-k)
    return lambda t: np.power(t, r)


def power(r: float) -> ScalarFunction:
    """t -> t^r with the flag table of the power family.

    Even positive integer powers live on the whole line; other
    exponents r >= 0 on [0, inf) and r < 0 on (0, inf).
    """
    r = float(r)
    if not math.isfinite(r):
        raise InputError("power exponent must be finite")
    if r < 0:
        domain, f0 = POSITIVE_REALS, None
    elif r == 0:
        domain, f0 = NONNEGATIVE_REALS, 1.0
    elif r.is_integer() and int(r) % 2 == 0:
        domain, f0 = REAL_LINE, 0.0
    else:
        domain, f0 = NONNEGATIVE_REALS, 0.0
    flags = Flags(
        convex_on_domain=r >= 1 or r <= 0,
        concave_on_domain=0 <= r <= 1,
        operator_monotone_increasing=0 <= r <= 1,
        operator_monotone_decreasing=-1 <= r <= 0,
        operator_convex=(-1 <= r <= 0) or (1 <= r <= 2),
        operator_concave=0 <= r <= 1,
        doubling=r <= 1,
    )
    return ScalarFunction("power", (r,), domain, flags, f0, _power_impl(r))


def log() -> ScalarFunction:
    flags = Flags(concave_on_domain=True, operator_monotone_increasing=True, operator_concave=True)
    return ScalarFunction("log", (), POSITIVE_REALS, flags, None, np.log)


def exp() -> ScalarFunction:
    return ScalarFunction("exp", (), REAL_LINE, Flags(convex_on_domain=True), 1.0, np.exp)


def inverse_shift(s: float) -> ScalarFunction:
    """t -> 1/(t+s) for s >= 0."""
    s = float(s)
    if not (s >= 0 and math.isfinite(s)):
        raise InputError(f"inverse_shift needs finite s >= 0, got {s}")
    flags = Flags(
        convex_on_domain=True,
        operator_monotone_decreasing=True,
        operator_convex=True,
        doubling=True,
    )
    if s == 0:
        return ScalarFunction("inverse_shift", (s,), POSITIVE_REALS, flags, None, lambda t: 1.0 / t)
    return ScalarFunction("inverse_shift", (s,), NONNEGATIVE_REALS, flags, 1.0 / s, lambda t: 1.0 / (t + s))


def affine(p: float, q: float) -> ScalarFunction:
    p, q = float(p), float(q)
    flags = Flags(
        convex_on_domain=True,
        concave_on_domain=True,
        operator_monotone_increasing=p >= 0,
        operator_monotone_decreasing=p <= 0,
        operator_convex=True,
        operator_concave=True,
        doubling=q >= 0,
    )
    return ScalarFunction("affine", (p, q), REAL_LINE, flags, q, lambda t: p * t + q)


REGISTRY = {
    "power": (power, ("r",)),
    "log": (log, ()),
    "exp": (exp, ()),
    "inverse_shift": (inverse_shift, ("s",)),
    "affine": (affine, ("p", "q")),
}


def from_spec(spec: dict) -> ScalarFunction:
    """Build a function from its JSON spec, e.g. ``{"family": "power", "r": 6}``."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise InputError(f"function spec needs a 'family' field: {spec!r}")
    family = spec["family"]
    if family not in REGISTRY:
        raise InputError(f"unknown function family {family!r}; known: {sorted(REGISTRY)}")
    ctor, keys = REGISTRY[family]
    missing = [k for k in keys if k not in spec]
    if missing:
        raise InputError(f"function family {family!r} needs field(s) {missing}")
    try:
        args = [float(spec[k]) for k in keys]
    except (TypeError, ValueError) as exc:
        raise InputError(f"non-numeric parameter in function spec {spec!r}") from exc
    return ctor(*args)


def parse_function(text: str) -> ScalarFunction:
    """Parse the command-line form ``family[:p1[,p2]]``, e.g. ``power:6``."""
    family, _, rest = text.strip().partition(":")
    if family not in REGISTRY:
        raise InputError(f"unknown function family {family!r}; known: {sorted(REGISTRY)}")
    _, keys = REGISTRY[family]
    values = [v for v in rest.split(",") if v.strip()] if rest else []
    if len(values) != len(keys):
        raise InputError(f"{family!r} expects {len(keys)} parameter(s) {list(keys)}, got {text!r}")
    return from_spec({"family": family, **dict(zip(keys, values))})


def evaluate(f: ScalarFunction, t: float) -> float:
    if not f.domain.contains(t):
        raise DomainViolation(f"{t!r} is outside the domain {f.domain} of {f}")
    return float(f(t))


def secant(f: ScalarFunction, a: float, b: float, t):
    """Chord of f through (a, f(a)) and (b, f(b)), evaluated at t."""
    if a == b:
        raise DegenerateInterval(f"secant needs a < b, got a == b == {a}")
    if a > b:
        raise InputError(f"secant needs a < b, got a={a}, b={b}")
    fa, fb = evaluate(f, a), evaluate(f, b)
    t = np.asarray(t, dtype=float)
    out = ((b - t) * fa + (t - a) * fb) / (b - a)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# flag audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    function: str
    samples: int
    seed: int
    checked: dict
    contradictions: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.contradictions


def sample_window(domain: Domain, width: float = 10.0) -> tuple[float, float]:
    """Finite window inside the domain used for sampling."""
    lo = domain.lo if math.isfinite(domain.lo) else -width
    hi = domain.hi if math.isfinite(domain.hi) else max(lo, 0.0) + width
    if domain.lo_open:
        lo = lo + 1e-3 * (hi - lo)
    if domain.hi_open:
        hi = hi - 1e-3 * (hi - lo)
    return lo, hi


def audit_flags(f: ScalarFunction, samples: int = 1000, seed: int = 0) -> AuditReport:
    """Spot-check declared scalar convexity/concavity/monotonicity on random triples.

    Each triple (a, b, w) tests f((1-w)a + wb) against (1-w)f(a) + wf(b), the
    midpoint w=1/2 included, and the ordering of f(a), f(b).  Flags are never
    modified.
    """
    if samples < 3:
        raise InputError("audit needs at least 3 samples")
    rng = np.random.default_rng(seed)
    lo, hi = sample_window(f.domain)
    a = rng.uniform(lo, hi, samples)
    b = rng.uniform(lo, hi, samples)
    w = rng.uniform(0.0, 1.0, samples)
    w[: max(1, samples // 4)] = 0.5
    a, b = np.minimum(a, b), np.maximum(a, b)
    fa, fb = f(a), f(b)
    fmix = f((1 - w) * a + w * b)
    chord = (1 - w) * fa + w * fb
    tol = 1e-12 * np.maximum(1.0, np.maximum(np.abs(fa), np.abs(fb)))
    results = {}
    bad = []
    declared = f.flags
    tests = {
        "convex_on_domain": bool(np.all(fmix <= chord + tol)),
        "concave_on_domain": bool(np.all(fmix >= chord - tol)),
        # operator monotone implies scalar monotone
        "operator_monotone_increasing": bool(np.all(fa <= fb + tol)),
        "operator_monotone_decreasing": bool(np.all(fa >= fb - tol)),
    }
    for name, passed in tests.items():
        if getattr(declared, name):
            results[name] = passed
            if not passed:
                bad.append(f"{name} declared but violated on samples")
    return AuditReport(f.name, samples, seed, results, tuple(bad))
