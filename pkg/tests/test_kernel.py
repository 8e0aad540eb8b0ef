"""Tests for the kernel scale and the closed-form constants."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expfrac.domain import Branch, DomainError, FracOrder, Interval
from expfrac.services.kernel import (
    SERIES_THRESHOLD,
    coef_dragomir,
    coef_midpoint,
    dragomir_moments,
    exp_moments,
    kernel_scale,
    pachpatte_p1,
    pachpatte_p2,
    pachpatte_weights,
)
from expfrac.services.limits import order_for_scale

mpmath.mp.dps = 50

BAND = [SERIES_THRESHOLD * f for f in (0.5, 0.99, 1.01, 2.0)]
SCALES = [1e-3, 0.1, 1.0, 10.0, 100.0]


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def _moment(j: int, A: float) -> mpmath.mpf:
    return mpmath.quad(lambda t: t**j * mpmath.exp(-A * t), [0, 1])


def _closed_forms(A: float) -> tuple[mpmath.mpf, ...]:
    """The four Dragomir-Agarwal moments, evaluated in 50-digit arithmetic."""
    A = mpmath.mpf(A)
    e_half = mpmath.exp(-A / 2)
    e_full = mpmath.exp(-A)
    i1 = -e_half / A + (1 - e_full) / A**2
    i2 = (1 - e_half + e_full) / A - (1 - e_full) / A**2
    i3 = -e_half / A + (1 + e_full) / A - (1 - e_full) / A**2
    return i1, i2, i3, i1


def test_kernel_scale_examples():
    """A = (1 − α)/α·(b − a), exactly zero at α = 1."""
    assert kernel_scale(FracOrder(1.0), Interval(0.0, 1.0)) == 0.0
    assert kernel_scale(FracOrder(0.5), Interval(0.0, 1.0)) == 1.0
    assert kernel_scale(FracOrder(0.25), Interval(2.0, 5.0)) == 9.0


@pytest.mark.parametrize("A", [1e-6, 1e-3, 5e-3, 0.02, 1.0, 10.0, 100.0])
def test_exp_moments_match_high_precision(A):
    """Both branches reproduce ∫₀¹ t^j e^{−At} dt for j ≤ 8."""
    moments = exp_moments(A, 8)
    for j, m in enumerate(moments):
        assert _rel(float(m), float(_moment(j, A))) < 1e-12


def test_exp_moments_rejects_bad_input():
    with pytest.raises(DomainError):
        exp_moments(-1.0, 2)
    with pytest.raises(DomainError):
        exp_moments(math.nan, 2)
    with pytest.raises(DomainError):
        exp_moments(1.0, 17)
    with pytest.raises(DomainError):
        exp_moments(0.0, 2, branch=Branch.DIRECT)


def test_coef_midpoint_examples():
    """Classical value, A = 1 value and convergence toward the classical limit."""
    assert coef_midpoint(FracOrder(1.0), Interval(0.0, 1.0)).value == 0.5
    expected = mpmath.mpf("0.25") / (1 - mpmath.exp(-1))
    assert _rel(coef_midpoint(FracOrder(0.5), Interval(0.0, 1.0)).value, float(expected)) < 1e-14

    wide = Interval(0.0, 2.0)
    errors = [abs(coef_midpoint(FracOrder(a), wide).value - 0.25) for a in (0.9, 0.99, 0.999, 0.9999)]
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < 1e-4


def test_coef_midpoint_branch_labels():
    unit = Interval(0.0, 1.0)
    assert coef_midpoint(FracOrder(0.5), unit).branch is Branch.DIRECT
    assert coef_midpoint(order_for_scale(1e-4, unit), unit).branch is Branch.SERIES


def test_coef_midpoint_large_scale():
    """At A = 50 the coefficient is (1 − α)/2 to rounding."""
    unit = Interval(0.0, 1.0)
    alpha = order_for_scale(50.0, unit)
    assert _rel(coef_midpoint(alpha, unit).value, 0.5 * (1.0 - alpha.alpha)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=0.999))
def test_coef_midpoint_normalization(alpha):
    """coef_midpoint·2(1 − e^{−A})/(1 − α) = 1 for every α in (0, 1)."""
    unit = Interval(0.0, 1.0)
    order = FracOrder(alpha)
    A = kernel_scale(order, unit)
    normalized = coef_midpoint(order, unit).value * 2.0 * -math.expm1(-A) / (1.0 - alpha)
    assert abs(normalized - 1.0) < 1e-12


def test_coef_dragomir_examples():
    """(b − a)/8 at α = 1, 0.5·tanh(0.25) at A = 1, and the length coupling."""
    assert coef_dragomir(FracOrder(1.0), Interval(0.0, 1.0)).value == 0.125
    expected = float(mpmath.mpf("0.5") * mpmath.tanh(mpmath.mpf("0.25")))
    unit_value = coef_dragomir(FracOrder(0.5), Interval(0.0, 1.0)).value
    assert _rel(unit_value, expected) < 1e-14

    # Same α on a longer interval changes A, so this is not a plain rescaling
    wide_value = coef_dragomir(FracOrder(0.5), Interval(0.0, 2.0)).value
    assert abs(wide_value - 2.0 * unit_value) > 1e-3


def test_coef_dragomir_series_expansion():
    """(b − a)/8·(1 − A²/48 + …) near A = 0."""
    unit = Interval(0.0, 1.0)
    for target in (1e-6, 1e-4, 1e-3):
        alpha = order_for_scale(target, unit)
        A = kernel_scale(alpha, unit)
        value = coef_dragomir(alpha, unit).value
        assert abs(value / 0.125 - (1.0 - A * A / 48.0)) < A**4 + 1e-15


@pytest.mark.parametrize("A", BAND)
def test_branches_agree_near_threshold(A):
    """Forced series and forced direct evaluation agree around the switch."""
    unit = Interval(0.0, 1.0)
    alpha = order_for_scale(A, unit)
    pairs = [
        (coef_midpoint(alpha, unit, branch=b).value for b in Branch),
        (coef_dragomir(alpha, unit, branch=b).value for b in Branch),
        (pachpatte_p1(A, branch=b).value for b in Branch),
        (pachpatte_p2(A, branch=b).value for b in Branch),
    ]
    for direct, series in pairs:
        assert _rel(series, direct) < 1e-12

    direct_w = pachpatte_weights(A, branch=Branch.DIRECT)
    series_w = pachpatte_weights(A, branch=Branch.SERIES)
    for d, s in zip(direct_w[:4], series_w[:4], strict=True):
        assert _rel(s, d) < 1e-12

    direct_m = dragomir_moments(A, branch=Branch.DIRECT)
    series_m = dragomir_moments(A, branch=Branch.SERIES)
    for d, s in zip(direct_m[:4], series_m[:4], strict=True):
        assert _rel(s, d) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=SERIES_THRESHOLD / 4, max_value=SERIES_THRESHOLD * 4))
def test_moment_branches_agree(A):
    direct = exp_moments(A, 6, branch=Branch.DIRECT)
    series = exp_moments(A, 6, branch=Branch.SERIES)
    np.testing.assert_allclose(series, direct, rtol=1e-12)


def test_pachpatte_p1_p2_examples():
    e = math.exp(-1.0)
    assert pachpatte_p1(0.0).value == 0.0
    assert pachpatte_p2(0.0).value == 0.0
    assert _rel(pachpatte_p1(1.0).value, 3.0 - 7.0 * e) < 1e-13
    assert _rel(pachpatte_p2(1.0).value, -1.0 + 3.0 * e) < 1e-13


@pytest.mark.parametrize("A", [1e-3, 0.1, 1.0, 10.0])
def test_pachpatte_p1_p2_high_precision(A):
    A_mp = mpmath.mpf(A)
    e = mpmath.exp(-A_mp)
    p1 = A_mp**2 - 2 * A_mp + 4 - (A_mp**2 + 2 * A_mp + 4) * e
    p2 = A_mp - 2 + (A_mp + 2) * e
    assert _rel(pachpatte_p1(A).value, float(p1)) < 1e-12
    assert _rel(pachpatte_p2(A).value, float(p2)) < 1e-12


def test_pachpatte_small_scale_limits():
    """P1/(2A³) → 1/3 and P2/A³ → 1/6."""
    A = 1e-8
    assert abs(pachpatte_p1(A).value / (2.0 * A**3) - 1.0 / 3.0) < 1e-12
    assert abs(pachpatte_p2(A).value / A**3 - 1.0 / 6.0) < 1e-12
    assert pachpatte_weights(0.0)[:4] == (1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0)


def test_pachpatte_constants_positive():
    """P1 and P2 stay strictly positive on a log grid A ∈ [1e-6, 1e3]."""
    for A in np.logspace(-6, 3, 91):
        assert pachpatte_p1(float(A)).value > 0.0
        assert pachpatte_p2(float(A)).value > 0.0


@pytest.mark.parametrize("A", SCALES)
def test_dragomir_moments_closed_forms(A):
    moments = dragomir_moments(A)
    for value, reference in zip(moments[:4], _closed_forms(A), strict=True):
        assert _rel(value, float(reference)) < 1e-12


@pytest.mark.parametrize("A", SCALES)
def test_dragomir_moments_defining_integrals(A):
    """Compare against quadrature of the defining integrals over [0, ½] and [½, 1]."""
    A_mp = mpmath.mpf(A)

    def diff(t):
        return mpmath.exp(-A_mp * t) - mpmath.exp(-A_mp * (1 - t))

    half = mpmath.mpf("0.5")
    expected = (
        mpmath.quad(lambda t: diff(t) * t, [0, half]),
        mpmath.quad(lambda t: diff(t) * (1 - t), [0, half]),
        mpmath.quad(lambda t: -diff(t) * t, [half, 1]),
        mpmath.quad(lambda t: -diff(t) * (1 - t), [half, 1]),
    )
    moments = dragomir_moments(A)
    for value, reference in zip(moments[:4], expected, strict=True):
        assert _rel(value, float(reference)) < 1e-12


@pytest.mark.parametrize("A", SCALES)
def test_dragomir_moment_sums(A):
    """I1 + I2 = (1 − e^{−A/2})²/A = I3 + I4."""
    m = dragomir_moments(A)
    expected = math.expm1(-0.5 * A) ** 2 / A
    assert _rel(m.i1 + m.i2, expected) < 1e-13
    assert _rel(m.i3 + m.i4, expected) < 1e-13


@pytest.mark.parametrize("A", SCALES)
def test_coef_dragomir_factorization(A):
    """coef_dragomir = (b − a)/(2(1 − e^{−A}))·(I1 + I2)."""
    iv = Interval(-2.0, 3.0)
    alpha = order_for_scale(A, iv)
    A_realized = kernel_scale(alpha, iv)
    m = dragomir_moments(A_realized)
    factored = iv.length / (2.0 * -math.expm1(-A_realized)) * (m.i1 + m.i2)
    assert _rel(coef_dragomir(alpha, iv).value, factored) < 1e-12


def test_dragomir_moments_reject_zero_scale():
    with pytest.raises(DomainError):
        dragomir_moments(0.0)
