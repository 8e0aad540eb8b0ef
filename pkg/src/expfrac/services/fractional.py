"""Left and right exponential-kernel fractional integrals.

    I^α_a u(x) = (1/α) ∫_a^x exp(−(1 − α)/α · (x − s)) u(s) ds
    I^α_b u(x) = (1/α) ∫_x^b exp(−(1 − α)/α · (s − x)) u(s) ds

At α = 1 the kernel is identically 1 and both reduce to the plain integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from expfrac.domain import DomainError, Evaluable, FracOrder, Interval, Side
from expfrac.metrics import track_quadrature

from .integrators import AdaptiveIntegrator, QuadratureConfig
from .kernel import exp_moments, kernel_scale

MAX_MONOMIAL_DEGREE = 8

# Boundary-layer seeds sit this many decades of kernel decay from the endpoint
LAYER_DECADES = (1, 2, 3, 4)


@dataclass(frozen=True, slots=True)
class FracIntegralValue:
    value: float
    est_error: float
    panels_used: int

    def __add__(self, other: FracIntegralValue) -> FracIntegralValue:
        return FracIntegralValue(
            self.value + other.value,
            self.est_error + other.est_error,
            self.panels_used + other.panels_used,
        )


def _check_endpoints(lo: float, hi: float) -> None:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"integration limits must be finite, got [{lo}, {hi}]")
    if not lo < hi:
        raise DomainError(f"fractional integral needs a nonempty interval, got [{lo}, {hi}]")


def _layer_seeds(alpha: FracOrder, endpoint: float, direction: float) -> list[float]:
    if alpha.is_classical:
        return []
    width = alpha.layer_width * math.log(10.0)
    return [endpoint + direction * j * width for j in LAYER_DECADES]


@track_quadrature("left")
def left_integral(
    u: Evaluable, alpha: FracOrder, a: float, x: float, cfg: QuadratureConfig | None = None
) -> FracIntegralValue:
    """I^α_a u(x) for x > a."""
    _check_endpoints(a, x)
    k = alpha.decay_rate
    inv_alpha = 1.0 / alpha.alpha

    def integrand(s: float) -> float:
        return inv_alpha * math.exp(-k * (x - s)) * float(u(s))

    points = (*_layer_seeds(alpha, x, -1.0), *u.breakpoints)
    result = AdaptiveIntegrator(cfg).integrate(integrand, a, x, points)
    return FracIntegralValue(result.value, result.est_error, result.panels_used)


@track_quadrature("right")
def right_integral(
    u: Evaluable, alpha: FracOrder, x: float, b: float, cfg: QuadratureConfig | None = None
) -> FracIntegralValue:
    """I^α_b u(x) for x < b."""
    _check_endpoints(x, b)
    k = alpha.decay_rate
    inv_alpha = 1.0 / alpha.alpha

    def integrand(s: float) -> float:
        return inv_alpha * math.exp(-k * (s - x)) * float(u(s))

    points = (*_layer_seeds(alpha, x, 1.0), *u.breakpoints)
    result = AdaptiveIntegrator(cfg).integrate(integrand, x, b, points)
    return FracIntegralValue(result.value, result.est_error, result.panels_used)


def endpoint_sum(
    u: Evaluable, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None = None
) -> FracIntegralValue:
    """I^α_a u(b) + I^α_b u(a), the quantity every middle term is built from."""
    return left_integral(u, alpha, iv.a, iv.b, cfg) + right_integral(u, alpha, iv.a, iv.b, cfg)


def monomial_closed_form(
    n: int, alpha: FracOrder, a: float, b: float, side: Side | str
) -> float:
    """Exact I^α_a s^n (b) (left) or I^α_b s^n (a) (right).

    Expands s^n about the evaluation endpoint, so the value is a binomial sum
    of exponential moments M_j(A), each evaluated stably for small A.
    """
    if not 0 <= n <= MAX_MONOMIAL_DEGREE:
        raise DomainError(f"monomial degree must lie in [0, {MAX_MONOMIAL_DEGREE}], got {n}")
    if alpha.is_classical:
        raise DomainError("monomial_closed_form covers 0 < alpha < 1 only")
    iv = Interval(a, b)
    length = iv.length
    moments = exp_moments(kernel_scale(alpha, iv), n)
    if Side(side) is Side.LEFT:
        # s = b − L·t
        origin, step = b, -length
    else:
        # s = a + L·t
        origin, step = a, length
    total = math.fsum(
        math.comb(n, j) * origin ** (n - j) * step**j * moments[j] for j in range(n + 1)
    )
    return length * total / alpha.alpha


@track_quadrature("unit")
def unit_interval_form(
    u: Evaluable, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None = None
) -> FracIntegralValue:
    """∫₀¹ e^{−At}[u(ta + (1 − t)b) + u((1 − t)a + tb)] dt.

    Equal to α/(b − a)·[I^α_a u(b) + I^α_b u(a)] by the substitutions used in
    all of the proofs; integrated independently of left/right_integral.
    """
    A = kernel_scale(alpha, iv)
    a, b = iv.a, iv.b

    def integrand(t: float) -> float:
        return math.exp(-A * t) * (float(u(t * a + (1.0 - t) * b)) + float(u((1.0 - t) * a + t * b)))

    points: list[float] = []
    if A > 0.0:
        points += [j * math.log(10.0) / A for j in LAYER_DECADES]
    for p in u.breakpoints:
        points += [(b - p) / iv.length, (p - a) / iv.length]
    result = AdaptiveIntegrator(cfg).integrate(integrand, 0.0, 1.0, tuple(points))
    return FracIntegralValue(result.value, result.est_error, result.panels_used)
