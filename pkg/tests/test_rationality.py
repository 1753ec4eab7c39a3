"""Bounded rationality detection."""

from fractions import Fraction

import numpy as np
import pytest

from cartankit.rationality import (
    DENOMINATOR_BOUND,
    QUALITY_MARGIN,
    RESIDUAL_TOL,
    RationalityVerdict,
    detect_rational,
)

GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0


def test_simple_fractions_are_recovered_exactly():
    for p, q in [(1, 2), (2, 3), (3, 5), (1, 5), (7, 13), (123456, 999983)]:
        verdict = detect_rational(p / q)
        assert verdict.rational
        assert (verdict.p, verdict.q) == (p, q)
        assert verdict.residual <= 1e-15


def test_negative_and_integer_inputs():
    verdict = detect_rational(-2.0 / 3.0)
    assert verdict.rational and (verdict.p, verdict.q) == (-2, 3)
    verdict = detect_rational(4.0)
    assert verdict.rational and (verdict.p, verdict.q) == (4, 1)
    verdict = detect_rational(0.0)
    assert verdict.rational and (verdict.p, verdict.q) == (0, 1)
    verdict = detect_rational(-0.75)
    assert verdict.rational and (verdict.p, verdict.q) == (-3, 4)


def test_non_finite_inputs_are_rejected():
    for x in (np.inf, -np.inf, np.nan):
        verdict = detect_rational(x)
        assert not verdict.rational
        assert verdict.p is None and verdict.q is None


def test_irrationals_are_rejected():
    for x in (np.pi - 3.0, np.sqrt(2.0), np.e / 10.0, 1.0 / GOLDEN_RATIO):
        assert not detect_rational(x).rational


def test_golden_ratio_needs_the_quality_margin():
    """At tol = 1/bound^2 the residual test alone is degenerate.

    The golden ratio admits a convergent within 1e-12 below denominator
    10^6 (Fibonacci 514229/832040, residual ~6.5e-13), so only the
    Dirichlet-quality margin residual * q^2 <= 1e-4 rejects it.
    """
    x = GOLDEN_RATIO - 1.0
    fib = Fraction(514229, 832040)
    residual = abs(x - float(fib))
    assert residual < RESIDUAL_TOL            # the raw tolerance is fooled
    assert residual * fib.denominator ** 2 > QUALITY_MARGIN
    verdict = detect_rational(x)
    assert not verdict.rational
    # with the margin disabled the detector would accept the convergent
    loose = detect_rational(x, quality=1.0)
    assert loose.rational
    assert (loose.p, loose.q) == (514229, 832040)


def test_denominator_bound_semantics():
    x = 355.0 / 113.0                          # pi's famous approximant
    assert detect_rational(x, bound=200).rational
    assert not detect_rational(x, bound=100).rational

    y = 1.0 / 999983.0                         # prime denominator near 10^6
    assert detect_rational(y).rational
    assert not detect_rational(y, bound=999982).rational


def test_semiconvergents_are_considered():
    # 5/8 has continued fraction [0; 1, 1, 1, 2]; truncating the convergent
    # recursion at bound 7 must still find the semiconvergent quality hit
    # for targets closer to 5/8 than any q <= 7 convergent
    x = 0.625
    verdict = detect_rational(x, bound=8)
    assert verdict.rational and (verdict.p, verdict.q) == (5, 8)
    capped = detect_rational(x, bound=7)
    assert not capped.rational


def test_perturbation_tolerance_scales():
    x = 2.0 / 3.0 + 5e-13
    assert detect_rational(x).rational          # inside tol 1e-12
    x = 2.0 / 3.0 + 5e-11
    assert not detect_rational(x).rational      # outside tol
    assert detect_rational(x, tol=1e-9).rational


def test_quality_margin_rejects_boundary_coincidences():
    # a fraction with q^2 ~ 1/tol: residual fits tol but fails the margin
    x = 17824.0 / 37219.0 + 8e-13
    raw = detect_rational(x, quality=1.0)
    assert raw.rational
    strict = detect_rational(x)
    assert not strict.rational


def test_verdict_serialization_round_trip():
    verdict = detect_rational(0.4)
    d = verdict.as_dict()
    assert d == {
        "rational": True, "p": 2, "q": 5, "residual": verdict.residual,
        "denominator_bound": DENOMINATOR_BOUND,
        "residual_tol": RESIDUAL_TOL, "quality_margin": QUALITY_MARGIN,
    }
    assert isinstance(verdict, RationalityVerdict)


def test_random_fractions_round_trip(rng):
    # |x| is kept of order one: for |x| in the thousands the rounding error
    # of the division alone exceeds the absolute residual tolerance
    for _ in range(200):
        q = int(rng.integers(2, 10**5))
        p = int(rng.integers(-q + 1, q))
        verdict = detect_rational(p / q)
        assert verdict.rational
        assert Fraction(verdict.p, verdict.q) == Fraction(p, q)
