"""Kernel scale and numerically stable closed-form constants.

Every constant of the inequality suite is a function of the kernel scale
A = (1 − α)/α · (b − a) alone (the interval length enters only as a prefactor).
The proofs integrate e^{−At} against low-degree polynomials on [0, 1], so the
constants are written through the exponential moments

    M_j(A) = ∫₀¹ t^j e^{−At} dt

which are evaluated two ways:

- direct: M_j = j!·P(j + 1, A)/A^{j+1} with the regularized lower incomplete
  gamma function P, free of the cancellation in the textbook forms
  (A − 2 + (A + 2)e^{−A} and friends);
- series: the Taylor expansion in A, used below SERIES_THRESHOLD.

Series coefficients are generated exactly with rational arithmetic at import
time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P  # noqa: N812
from numpy.typing import NDArray
from scipy import special

from expfrac.domain import Branch, DomainError, FracOrder, Interval

SERIES_THRESHOLD = 1e-2

# Number of series terms; the truncation error at the threshold is far
# below double precision.
SERIES_TERMS = 14

MAX_MOMENT_ORDER = 16


@dataclass(frozen=True, slots=True)
class StableValue:
    """A constant together with the branch that produced it."""

    value: float
    branch: Branch

    def __float__(self) -> float:
        return self.value


class DragomirMoments(NamedTuple):
    i1: float
    i2: float
    i3: float
    i4: float
    branch: Branch


class PachpatteWeights(NamedTuple):
    """Normalized Pachpatte constants.

    first_same/first_cross weight (u(a)v(a) + u(b)v(b)) and
    (u(a)v(b) + u(b)v(a)) in the first inequality; second_same/second_cross
    likewise in the second.
    """

    first_same: float
    first_cross: float
    second_same: float
    second_cross: float
    branch: Branch


# Rational series machinery --------------------------------------------------

Series = list[Fraction]


def _exp_series(rate: Fraction, order: int) -> Series:
    """Taylor coefficients of exp(rate·A) up to A**order."""
    return [rate**n / math.factorial(n) for n in range(order + 1)]


def _add(*terms: Series) -> Series:
    size = max(len(t) for t in terms)
    return [sum((t[n] for t in terms if n < len(t)), Fraction(0)) for n in range(size)]


def _scale(c: Fraction | int, s: Series) -> Series:
    return [c * x for x in s]


def _times_power(s: Series, k: int) -> Series:
    return [Fraction(0)] * k + s


def _divide_power(s: Series, k: int) -> Series:
    if any(x != 0 for x in s[:k]):
        raise ArithmeticError(f"series is not divisible by A**{k}")
    return s[k:]


def _to_float(s: Series, terms: int = SERIES_TERMS) -> NDArray[np.float64]:
    return np.array([float(x) for x in s[:terms]], dtype=np.float64)


@cache
def _moment_coefficients(j: int) -> NDArray[np.float64]:
    # ∫₀¹ t^j e^{−At} dt = Σ_m (−A)^m / (m!(j + m + 1))
    return _to_float(
        [Fraction((-1) ** m, math.factorial(m) * (j + m + 1)) for m in range(SERIES_TERMS)]
    )


def _dragomir_series() -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    order = SERIES_TERMS + 3
    one = [Fraction(1)]
    e_full = _exp_series(Fraction(-1), order)
    e_half = _exp_series(Fraction(-1, 2), order)
    # I1·A² = 1 − e^{−A} − A·e^{−A/2}
    i1 = _add(one, _scale(-1, e_full), _scale(-1, _times_power(e_half, 1)))
    # I2·A² = A(1 − e^{−A/2} + e^{−A}) − (1 − e^{−A})
    i2 = _add(
        _times_power(_add(one, _scale(-1, e_half), e_full), 1),
        _scale(-1, _add(one, _scale(-1, e_full))),
    )
    return _to_float(_divide_power(i1, 2)), _to_float(_divide_power(i2, 2))


_I1_SERIES, _I2_SERIES = _dragomir_series()

# e^{−h}·(sinh h − h) = e^{−h}·h³·Σ_k h^{2k}/(2k + 3)!
_SINH_EXCESS_SERIES = _to_float(
    [Fraction(1, math.factorial(2 * k + 3)) for k in range(SERIES_TERMS)]
)


def _check_scale(A: float) -> None:
    if not math.isfinite(A) or A < 0.0:
        raise DomainError(f"kernel scale must be finite and nonnegative, got {A!r}")


def _branch(A: float) -> Branch:
    return Branch.SERIES if A < SERIES_THRESHOLD else Branch.DIRECT


def _resolve(A: float, branch: Branch | None) -> Branch:
    if branch is None:
        return _branch(A)
    if branch is Branch.DIRECT and A == 0.0:
        raise DomainError("the direct branch is undefined at A = 0")
    return branch


# Public operations ----------------------------------------------------------


def kernel_scale(alpha: FracOrder, iv: Interval) -> float:
    """A = (1 − α)/α · (b − a); exactly 0 when α = 1."""
    return alpha.decay_rate * iv.length


def exp_moments(A: float, n: int, *, branch: Branch | None = None) -> NDArray[np.float64]:
    """M_0(A) … M_n(A) with M_j(A) = ∫₀¹ t^j e^{−At} dt.

    `branch` forces an evaluation path; by default the series is used below
    SERIES_THRESHOLD.
    """
    _check_scale(A)
    if not 0 <= n <= MAX_MOMENT_ORDER:
        raise DomainError(f"moment order must lie in [0, {MAX_MOMENT_ORDER}], got {n}")
    if _resolve(A, branch) is Branch.SERIES:
        return np.array([P.polyval(A, _moment_coefficients(j)) for j in range(n + 1)])
    j = np.arange(n + 1, dtype=np.float64)
    return special.factorial(j) * special.gammainc(j + 1.0, A) / A ** (j + 1.0)


def coef_midpoint(
    alpha: FracOrder, iv: Interval, *, branch: Branch | None = None
) -> StableValue:
    """Middle-term coefficient (1 − α)/(2(1 − e^{−A})) of the fractional HH chain.

    The series branch evaluates α/(2(b − a)·M_0(A)), which equals
    α/(2(b − a)) · A/(1 − e^{−A}); at α = 1 the value is exactly 1/(2(b − a)).
    """
    if alpha.is_classical:
        return StableValue(1.0 / (2.0 * iv.length), Branch.SERIES)
    A = kernel_scale(alpha, iv)
    chosen = _resolve(A, branch)
    if chosen is Branch.SERIES:
        m0 = exp_moments(A, 0, branch=chosen)[0]
        return StableValue(alpha.alpha / (2.0 * iv.length * m0), chosen)
    return StableValue((1.0 - alpha.alpha) / (2.0 * -math.expm1(-A)), chosen)


def coef_dragomir(
    alpha: FracOrder, iv: Interval, *, branch: Branch | None = None
) -> StableValue:
    """Dragomir-Agarwal bound constant (b − a)/(2A) · tanh(A/4).

    Series form: (b − a)/8 · M_0(A/2)²/M_0(A) = (b − a)/8 · (1 − A²/48 + …);
    exactly (b − a)/8 at α = 1.
    """
    if alpha.is_classical:
        return StableValue(iv.length / 8.0, Branch.SERIES)
    A = kernel_scale(alpha, iv)
    chosen = _resolve(A, branch)
    if chosen is Branch.SERIES:
        half = exp_moments(0.5 * A, 0, branch=chosen)[0]
        full = exp_moments(A, 0, branch=chosen)[0]
        return StableValue(iv.length / 8.0 * half * half / full, chosen)
    return StableValue(iv.length / (2.0 * A) * math.tanh(0.25 * A), chosen)


def pachpatte_p2(A: float, *, branch: Branch | None = None) -> StableValue:
    """A − 2 + (A + 2)e^{−A} = A³(M_1 − M_2); ~A³/6 as A → 0."""
    _check_scale(A)
    chosen = _resolve(A, branch)
    m = exp_moments(A, 2, branch=chosen)
    return StableValue(A**3 * (m[1] - m[2]), chosen)


def pachpatte_p1(A: float, *, branch: Branch | None = None) -> StableValue:
    """A² − 2A + 4 − (A² + 2A + 4)e^{−A} = A³(2M_2 − 2M_1 + M_0); ~2A³/3 as A → 0."""
    _check_scale(A)
    chosen = _resolve(A, branch)
    m = exp_moments(A, 2, branch=chosen)
    return StableValue(A**3 * (2.0 * m[2] - 2.0 * m[1] + m[0]), chosen)


def pachpatte_weights(A: float, *, branch: Branch | None = None) -> PachpatteWeights:
    """P1/(2A³), P2/A³, P2/(A²(1 − e^{−A})), P1/(2A²(1 − e^{−A})).

    Exactly (1/3, 1/6, 1/6, 1/3) at A = 0.
    """
    _check_scale(A)
    chosen = _resolve(A, branch)
    if A == 0.0:
        return PachpatteWeights(1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, chosen)
    m = exp_moments(A, 2, branch=chosen)
    p1_norm = 2.0 * m[2] - 2.0 * m[1] + m[0]
    p2_norm = m[1] - m[2]
    return PachpatteWeights(
        first_same=0.5 * p1_norm,
        first_cross=p2_norm,
        second_same=p2_norm / m[0],
        second_cross=0.5 * p1_norm / m[0],
        branch=chosen,
    )


def _sinh_excess(h: float) -> float:
    """e^{−h}·(sinh h − h) without cancellation."""
    if h < 1.0:
        return math.exp(-h) * h**3 * P.polyval(h * h, _SINH_EXCESS_SERIES)
    return -0.5 * math.expm1(-2.0 * h) - h * math.exp(-h)


def dragomir_moments(A: float, *, branch: Branch | None = None) -> DragomirMoments:
    """The four kernel-difference moments of the Dragomir-Agarwal bound.

    With D(t) = e^{−At} − e^{−A(1−t)}:
      I1 = ∫₀^½ D(t)·t dt,        I2 = ∫₀^½ D(t)·(1 − t) dt,
      I3 = ∫_½^1 −D(t)·t dt,      I4 = ∫_½^1 −D(t)·(1 − t) dt.
    By the reflection t ↦ 1 − t, I3 = I2 and I4 = I1 as closed forms. The
    fourth is printed in the literature under a repeated "I_2" label and with
    the sign of its integrand flipped; we return the positive moment.
    """
    _check_scale(A)
    if A == 0.0:
        raise DomainError("dragomir_moments requires A > 0; use coef_dragomir at A = 0")
    chosen = _resolve(A, branch)
    h = 0.5 * A
    if chosen is Branch.SERIES:
        i1 = float(P.polyval(A, _I1_SERIES))
        i2 = float(P.polyval(A, _I2_SERIES))
    else:
        i1 = 2.0 * _sinh_excess(h) / (A * A)
        m = exp_moments(A, 2, branch=chosen)
        i2 = i1 + A * (m[1] - m[2])
    # I1 + I2 = (1 − e^{−A/2})²/A = (A/2)·M_0(A/2)²/2
    half_sum = 0.5 * h * exp_moments(h, 0, branch=chosen)[0] ** 2
    return DragomirMoments(i1=i1, i2=i2, i3=half_sum - i1, i4=half_sum - i2, branch=chosen)
