import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from loewner_lab.errors import DegenerateInterval, DomainViolation, InputError
from loewner_lab.functions import (
    REGISTRY,
    affine,
    audit_flags,
    evaluate,
    exp,
    from_spec,
    inverse_shift,
    log,
    parse_function,
    power,
    sample_window,
    secant,
)

BUILTINS = [
    power(-2), power(-1), power(-0.5), power(0), power(1 / 3), power(0.5), power(1),
    power(1.5), power(2), power(3), power(6), log(), exp(),
    inverse_shift(0), inverse_shift(1), affine(1, 0), affine(-2, 5), affine(3, -1),
]


def test_eval_examples():
    assert evaluate(power(3), 2.0) == 8.0
    assert evaluate(inverse_shift(0), 4.0) == 0.25
    assert evaluate(log(), 1.0) == 0.0


def test_eval_outside_domain():
    with pytest.raises(DomainViolation):
        evaluate(power(-1), 0.0)
    with pytest.raises(DomainViolation):
        evaluate(power(0.5), -1.0)


def test_secant_examples():
    sq = power(2)
    assert secant(sq, 1, 2, 1.5) == 2.5
    assert secant(sq, 1, 2, 1) == 1.0
    assert secant(inverse_shift(0), 2, 3, 2.5) == pytest.approx((5 - 2.5) / 6, abs=1e-15)


def test_secant_degenerate():
    with pytest.raises(DegenerateInterval):
        secant(power(2), 1.0, 1.0, 1.0)


@given(st.sampled_from(BUILTINS), st.floats(0.1, 5), st.floats(0.1, 5))
def test_secant_hits_endpoints(f, a, w):
    b = a + w
    assert secant(f, a, b, a) == pytest.approx(evaluate(f, a), rel=1e-12, abs=1e-12)
    assert secant(f, a, b, b) == pytest.approx(evaluate(f, b), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize(
    "r, convex, concave, omi, omd, oconv, oconc",
    [
        (-2.0, True, False, False, False, False, False),
        (-1.0, True, False, False, True, True, False),
        (-0.5, True, False, False, True, True, False),
        (0.0, True, True, True, True, True, True),
        (1 / 3, False, True, True, False, False, True),
        (1.0, True, True, True, False, True, True),
        (1.5, True, False, False, False, True, False),
        (2.0, True, False, False, False, True, False),
        (3.0, True, False, False, False, False, False),
        (6.0, True, False, False, False, False, False),
    ],
)
def test_power_flag_table(r, convex, concave, omi, omd, oconv, oconc):
    fl = power(r).flags
    assert (fl.convex_on_domain, fl.concave_on_domain) == (convex, concave)
    assert (fl.operator_monotone_increasing, fl.operator_monotone_decreasing) == (omi, omd)
    assert (fl.operator_convex, fl.operator_concave) == (oconv, oconc)


def test_other_family_flags():
    assert log().flags.concave_on_domain and log().flags.operator_monotone_increasing
    assert exp().flags.convex_on_domain and not exp().flags.operator_convex
    fl = inverse_shift(1).flags
    assert fl.convex_on_domain and fl.operator_monotone_decreasing and fl.operator_convex


def test_power_domains():
    assert not power(-1).domain.contains(0.0)
    assert power(0.5).domain.contains(0.0) and not power(0.5).domain.contains(-1e-9)
    assert power(2).domain.contains(-3.0)
    assert power(0).value_at_zero == 1.0


@pytest.mark.parametrize("f", BUILTINS, ids=lambda f: f.name)
def test_audit_never_contradicts(f):
    report = audit_flags(f, samples=1000, seed=0)
    assert report.ok, report.contradictions


def test_audit_catches_misdeclared_flag():
    import dataclasses

    liar = dataclasses.replace(power(3), flags=dataclasses.replace(power(3).flags, concave_on_domain=True))
    assert not audit_flags(liar, samples=200, seed=1).ok


def test_audit_needs_three_samples():
    with pytest.raises(InputError):
        audit_flags(power(2), samples=2)


@pytest.mark.parametrize("f", [f for f in BUILTINS if f.flags.doubling], ids=lambda f: f.name)
def test_doubling_on_samples(f):
    lo, hi = sample_window(f.domain)
    t = np.random.default_rng(5).uniform(max(lo, 1e-3), hi, 10_000)
    assert np.all(f(2 * t) <= 2 * f(t) + 1e-12)


@pytest.mark.parametrize(
    "f",
    [f for f in BUILTINS if f.flags.concave_on_domain and (f.value_at_zero or 0) >= 0 and f.value_at_zero is not None],
    ids=lambda f: f.name,
)
def test_concave_scaling(f):
    rng = np.random.default_rng(6)
    t = rng.uniform(0, 10, 2000)
    alpha = rng.uniform(1, 10, 2000)
    assert np.all(f(alpha * t) <= alpha * f(t) + 1e-12 * np.maximum(1, np.abs(alpha * f(t))))


@pytest.mark.parametrize("f", [f for f in BUILTINS if f.flags.operator_monotone_decreasing and f.family != "affine"],
                         ids=lambda f: f.name)
def test_decreasing_scaling(f):
    rng = np.random.default_rng(7)
    t = rng.uniform(0.01, 10, 2000)
    alpha = rng.uniform(1, 10, 2000)
    assert np.all(f(alpha * t) >= f(t) / alpha - 1e-12)


@pytest.mark.parametrize("f", BUILTINS, ids=lambda f: f.name)
def test_spec_round_trip(f):
    g = from_spec(f.to_spec())
    assert g.to_spec() == f.to_spec()
    assert g.flags == f.flags


def test_parse_function():
    assert parse_function("power:6").to_spec() == {"family": "power", "r": 6.0}
    assert parse_function("affine:1,0").to_spec() == {"family": "affine", "p": 1.0, "q": 0.0}
    assert parse_function("log").family == "log"
    assert set(REGISTRY) == {"power", "log", "exp", "inverse_shift", "affine"}


@pytest.mark.parametrize("text", ["cosh", "power", "power:1,2", "affine:1", "power:x"])
def test_parse_function_rejects(text):
    with pytest.raises(InputError):
        parse_function(text)


def test_from_spec_rejects_missing_family():
    with pytest.raises(InputError):
        from_spec({"r": 2})


def test_inverse_shift_negative_rejected():
    with pytest.raises(InputError):
        inverse_shift(-1)


def test_vectorized_evaluation():
    f = power(1 / 3)
    t = np.array([0.0, 1.0, 8.0, 27.0])
    assert f(t) == pytest.approx([0.0, 1.0, 2.0, 3.0], rel=1e-14)
    assert math.isclose(float(inverse_shift(1)(1.0)), 0.5)
