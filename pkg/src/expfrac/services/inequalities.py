"""Numerical checks of the fractional Hermite-Hadamard type inequalities.

Every check evaluates the terms of one inequality chain, the slacks between
adjacent terms in the asserted direction and a verdict margin derived from
the quadrature error estimates. At α = 1 the kernel constants take their
exact classical values, so each check reduces to the classical inequality.

The margin is max(verdict_floor, 10·Σ est_error, ROUNDING_FACTOR·max|term|)
with ROUNDING_FACTOR = 1e3·eps. A slack of at least −margin holds, one below
−10·margin is a violation and anything between is inconclusive.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from typing import NamedTuple

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from expfrac.config import get_settings
from expfrac.domain import (
    Branch,
    DomainError,
    Evaluable,
    FracOrder,
    FunctionSpec,
    HypothesisViolation,
    InequalityName,
    InequalityReport,
    Interval,
    NegativeFunction,
    NoDerivative,
    Product,
    Shape,
    ShapeUnknown,
    Term,
    WeightInvalid,
    WeightSpec,
    negated,
)
from expfrac.domain.functions import grid_minimum, midpoint_convex
from expfrac.domain.reports import decide_verdict
from expfrac.metrics import track_check

from .fractional import (
    LAYER_DECADES,
    FracIntegralValue,
    endpoint_sum,
    left_integral,
    right_integral,
)
from .integrators import AdaptiveIntegrator, QuadratureConfig
from .kernel import coef_dragomir, coef_midpoint, exp_moments, kernel_scale, pachpatte_weights

logger = structlog.get_logger()

SCREEN_GRID = 1001

# Slacks are differences of terms; allow a few hundred ulps of the largest
ROUNDING_FACTOR = 1e3 * float(np.finfo(np.float64).eps)

# Relative tolerance of the equal-mass screen
WEIGHT_TOLERANCE = 1e-10


class _TermValue(NamedTuple):
    name: str
    value: float
    error: float


def verdict_margin(
    errors: Sequence[float], values: Sequence[float], floor: float | None = None
) -> float:
    """max(floor, 10·Σ error, ROUNDING_FACTOR·max|term|)."""
    if floor is None:
        floor = get_settings().verdict_floor
    scale = max((abs(v) for v in values), default=0.0)
    return max(floor, 10.0 * math.fsum(errors), ROUNDING_FACTOR * scale)


def _build_report(
    name: InequalityName,
    alpha: FracOrder,
    iv: Interval,
    shape: Shape,
    terms: Sequence[_TermValue],
    *,
    ascending: bool,
    panels_used: int,
    coef_branch: Branch | None,
    asserted: bool = True,
) -> InequalityReport:
    values = [t.value for t in terms]
    steps = [hi - lo for lo, hi in zip(values, values[1:], strict=False)]
    slacks = steps if ascending else [-s for s in steps]
    errors = [t.error for t in terms]
    margin = verdict_margin(errors, values)
    return InequalityReport(
        name=name,
        alpha=alpha.alpha,
        a=iv.a,
        b=iv.b,
        A=kernel_scale(alpha, iv),
        shape=shape,
        terms=[Term(name=t.name, value=t.value) for t in terms],
        slacks=slacks,
        margin=margin,
        verdict=decide_verdict(slacks, margin),
        est_error=math.fsum(errors),
        panels_used=panels_used,
        coef_branch=coef_branch,
        asserted=asserted,
    )


def _negate_terms(report: InequalityReport) -> InequalityReport:
    """Report of the reversed chain from the convex report of −u."""
    return report.model_copy(
        update={
            "terms": [Term(name=t.name, value=-t.value) for t in report.terms],
            "shape": Shape.CONCAVE,
        }
    )


def _certified_shape(u: FunctionSpec, what: str = "u") -> Shape:
    if u.shape is Shape.UNKNOWN:
        raise ShapeUnknown(f"{what} ({u.family_name}) carries no convexity certificate")
    return u.shape


def _value(u: Evaluable, x: float) -> float:
    return float(u(x))


# Hermite-Hadamard -----------------------------------------------------------


def _hermite_hadamard_convex(
    u: FunctionSpec, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None
) -> InequalityReport:
    coef = coef_midpoint(alpha, iv)
    sums = endpoint_sum(u, alpha, iv, cfg)
    terms = [
        _TermValue("lhs", _value(u, iv.midpoint), 0.0),
        _TermValue("mid", coef.value * sums.value, coef.value * sums.est_error),
        _TermValue("rhs", 0.5 * (_value(u, iv.a) + _value(u, iv.b)), 0.0),
    ]
    return _build_report(
        InequalityName.HH, alpha, iv, Shape.CONVEX, terms,
        ascending=True, panels_used=sums.panels_used, coef_branch=coef.branch,
    )


@track_check(InequalityName.HH)
def check_hermite_hadamard(
    u: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
    *,
    strict: bool = False,
) -> InequalityReport:
    """u((a+b)/2) ≤ coef_midpoint·(I^α_a u(b) + I^α_b u(a)) ≤ (u(a) + u(b))/2.

    Reversed for concave u. Strict mode additionally enforces u > 0 on the
    interval and 0 ≤ a.
    """
    shape = _certified_shape(u)
    if strict:
        if iv.a < 0.0:
            raise HypothesisViolation(f"strict mode requires 0 <= a, got a = {iv.a}")
        low = grid_minimum(u, iv, SCREEN_GRID)
        if low <= 0.0:
            raise HypothesisViolation(f"strict mode requires u > 0, grid minimum is {low}")
    if shape is Shape.CONCAVE:
        return _negate_terms(_hermite_hadamard_convex(negated(u), alpha, iv, cfg))
    return _hermite_hadamard_convex(u, alpha, iv, cfg)


# Hermite-Hadamard-Fejér -----------------------------------------------------


def weight_masses(
    v: Evaluable, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None = None
) -> tuple[FracIntegralValue, FracIntegralValue]:
    """(I^α_a v(b), I^α_b v(a)); equal for a weight symmetric about the midpoint."""
    return left_integral(v, alpha, iv.a, iv.b, cfg), right_integral(v, alpha, iv.a, iv.b, cfg)


def _screen_weight(
    v: WeightSpec, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None
) -> FracIntegralValue:
    if (v.a, v.b) != (iv.a, iv.b):
        raise WeightInvalid(f"weight lives on [{v.a}, {v.b}], check interval is {iv}")
    low = v.minimum(SCREEN_GRID)
    if low < 0.0:
        raise WeightInvalid(f"weight is negative on the interval (grid minimum {low})")
    # Mirrored nodes share one distance value, so any defect is a real asymmetry
    defect = v.symmetry_defect(SCREEN_GRID)
    if defect != 0.0:
        raise WeightInvalid(f"weight is not symmetric about {iv.midpoint} (defect {defect:.3e})")
    left, right = weight_masses(v, alpha, iv, cfg)
    gap = abs(left.value - right.value)
    if gap > 10.0 * (left.est_error + right.est_error) + WEIGHT_TOLERANCE * abs(left.value):
        raise WeightInvalid(
            f"left and right weight masses differ: {left.value!r} vs {right.value!r}"
        )
    return left + right


def _fejer_convex(
    u: FunctionSpec,
    v: WeightSpec,
    mass: FracIntegralValue,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None,
) -> InequalityReport:
    weighted = endpoint_sum(Product(u, v), alpha, iv, cfg)
    at_mid = _value(u, iv.midpoint)
    ends = 0.5 * (_value(u, iv.a) + _value(u, iv.b))
    terms = [
        _TermValue("lhs", at_mid * mass.value, abs(at_mid) * mass.est_error),
        _TermValue("mid", weighted.value, weighted.est_error),
        _TermValue("rhs", ends * mass.value, abs(ends) * mass.est_error),
    ]
    return _build_report(
        InequalityName.FEJER, alpha, iv, Shape.CONVEX, terms,
        ascending=True, panels_used=mass.panels_used + weighted.panels_used, coef_branch=None,
    )


@track_check(InequalityName.FEJER)
def check_fejer(
    u: FunctionSpec,
    v: WeightSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
) -> InequalityReport:
    """u(m)·W ≤ I^α_a(uv)(b) + I^α_b(uv)(a) ≤ (u(a) + u(b))/2·W, W = I^α_a v(b) + I^α_b v(a)."""
    shape = _certified_shape(u)
    mass = _screen_weight(v, alpha, iv, cfg)
    if shape is Shape.CONCAVE:
        return _negate_terms(_fejer_convex(negated(u), v, mass, alpha, iv, cfg))
    return _fejer_convex(u, v, mass, alpha, iv, cfg)


# Dragomir-Agarwal -----------------------------------------------------------


def _require_derivative(u: FunctionSpec) -> None:
    if not u.has_derivative:
        raise NoDerivative(f"{u.family_name} function is not differentiable on the interval")


def _trapezoid_gap(
    u: FunctionSpec, alpha: FracOrder, iv: Interval, cfg: QuadratureConfig | None
) -> tuple[float, float, FracIntegralValue, Branch]:
    """(u(a)+u(b))/2 − coef_midpoint·(I^α_a u(b) + I^α_b u(a)) with its error."""
    coef = coef_midpoint(alpha, iv)
    sums = endpoint_sum(u, alpha, iv, cfg)
    ends = 0.5 * (_value(u, iv.a) + _value(u, iv.b))
    return ends - coef.value * sums.value, coef.value * sums.est_error, sums, coef.branch


@track_check(InequalityName.DA)
def check_dragomir_agarwal(
    u: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
) -> InequalityReport:
    """|(u(a)+u(b))/2 − coef_midpoint·(I^α_a u(b) + I^α_b u(a))| ≤ coef_dragomir·(|u'(a)| + |u'(b)|).

    Requires |u'| convex on [a, b], screened on a grid.
    """
    _require_derivative(u)

    def abs_derivative(x: ArrayLike) -> NDArray[np.float64]:
        return np.abs(u.derivative(x))

    if not midpoint_convex(abs_derivative, iv, SCREEN_GRID):
        raise ShapeUnknown(f"|u'| of the {u.family_name} function is not convex on {iv}")
    gap, gap_error, sums, branch = _trapezoid_gap(u, alpha, iv, cfg)
    slopes = float(abs_derivative(iv.a)) + float(abs_derivative(iv.b))
    terms = [
        _TermValue("gap", abs(gap), gap_error),
        _TermValue("bound", coef_dragomir(alpha, iv).value * slopes, 0.0),
    ]
    return _build_report(
        InequalityName.DA, alpha, iv, Shape.CONVEX, terms,
        ascending=True, panels_used=sums.panels_used, coef_branch=branch,
    )


def _kernel_difference(A: float) -> Callable[[float], float]:
    """t ↦ (e^{−At} − e^{−A(1−t)})/A, tending to 1 − 2t as A → 0."""
    if A == 0.0:
        return lambda t: 1.0 - 2.0 * t
    if A < 1.0:
        # 2e^{−A/2}·sinh(A(½ − t))/A has no cancellation
        scale = 2.0 * math.exp(-0.5 * A) / A
        return lambda t: scale * math.sinh(A * (0.5 - t))
    return lambda t: (math.exp(-A * t) - math.exp(-A * (1.0 - t))) / A


def dragomir_identity_residual(
    u: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
) -> float:
    """|LHS − RHS| of the identity behind the Dragomir-Agarwal bound.

    LHS = (u(a)+u(b))/2 − coef_midpoint·(I^α_b u(a) + I^α_a u(b))
    RHS = (b−a)/(2(1−e^{−A}))·∫₀¹ (e^{−At} − e^{−A(1−t)}) u'(ta + (1−t)b) dt

    The right side is integrated in t, independently of the fractional
    integrals on the left.
    """
    _require_derivative(u)
    A = kernel_scale(alpha, iv)
    a, b, length = iv.a, iv.b, iv.length
    kernel = _kernel_difference(A)

    def integrand(t: float) -> float:
        return kernel(t) * float(u.derivative(t * a + (1.0 - t) * b))

    points = [(b - p) / length for p in u.breakpoints]
    if A > 0.0:
        seeds = [j * math.log(10.0) / A for j in LAYER_DECADES]
        points += [*seeds, *(1.0 - s for s in seeds)]
    rhs_integral = AdaptiveIntegrator(cfg).integrate(integrand, 0.0, 1.0, tuple(points))
    # 1 − e^{−A} = A·M_0(A)
    m0 = exp_moments(A, 0)[0]
    rhs = 0.5 * length / m0 * rhs_integral.value
    lhs, _, _, _ = _trapezoid_gap(u, alpha, iv, cfg)
    residual = abs(lhs - rhs)
    logger.debug("dragomir_identity", alpha=alpha.alpha, lhs=lhs, rhs=rhs, residual=residual)
    return residual


# Pachpatte ------------------------------------------------------------------


def _pachpatte_screen(u: FunctionSpec, v: FunctionSpec, iv: Interval, lax: bool) -> Shape:
    shape_u = _certified_shape(u, "u")
    shape_v = _certified_shape(v, "v")
    if shape_u is not shape_v:
        raise ShapeUnknown(f"u is {shape_u} but v is {shape_v}; both must share one certificate")
    if not lax:
        for label, f in (("u", u), ("v", v)):
            low = grid_minimum(f, iv, SCREEN_GRID)
            if low < 0.0:
                raise NegativeFunction(f"{label} is negative on {iv} (grid minimum {low})")
    return shape_u


def _corner_products(u: FunctionSpec, v: FunctionSpec, iv: Interval) -> tuple[float, float]:
    """(u(a)v(a) + u(b)v(b), u(a)v(b) + u(b)v(a))."""
    ua, ub = _value(u, iv.a), _value(u, iv.b)
    va, vb = _value(v, iv.a), _value(v, iv.b)
    return ua * va + ub * vb, ua * vb + ub * va


@track_check(InequalityName.PACHPATTE1)
def check_pachpatte_first(
    u: FunctionSpec,
    v: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
    *,
    lax: bool = False,
) -> InequalityReport:
    """α/(2(b−a))·(I^α_a(uv)(b) + I^α_b(uv)(a)) ≤ same·P1/(2A³) + cross·P2/A³.

    Reversed for a nonnegative concave pair. In lax mode the nonnegativity
    screen is skipped and the report is not asserted.
    """
    shape = _pachpatte_screen(u, v, iv, lax)
    sums = endpoint_sum(Product(u, v), alpha, iv, cfg)
    weights = pachpatte_weights(kernel_scale(alpha, iv))
    same, cross = _corner_products(u, v, iv)
    scale = 0.5 * alpha.alpha / iv.length
    terms = [
        _TermValue("lhs", scale * sums.value, scale * sums.est_error),
        _TermValue("rhs", same * weights.first_same + cross * weights.first_cross, 0.0),
    ]
    return _build_report(
        InequalityName.PACHPATTE1, alpha, iv, shape, terms,
        ascending=shape is Shape.CONVEX, panels_used=sums.panels_used,
        coef_branch=weights.branch, asserted=not lax,
    )


@track_check(InequalityName.PACHPATTE2)
def check_pachpatte_second(
    u: FunctionSpec,
    v: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
    *,
    lax: bool = False,
) -> InequalityReport:
    """2u(m)v(m) ≤ coef_midpoint·(I^α_a(uv)(b) + I^α_b(uv)(a)) + same·P2/(A²(1−e^{−A})) + cross·P1/(2A²(1−e^{−A}))."""
    shape = _pachpatte_screen(u, v, iv, lax)
    sums = endpoint_sum(Product(u, v), alpha, iv, cfg)
    coef = coef_midpoint(alpha, iv)
    weights = pachpatte_weights(kernel_scale(alpha, iv))
    same, cross = _corner_products(u, v, iv)
    m = iv.midpoint
    terms = [
        _TermValue("lhs", 2.0 * _value(u, m) * _value(v, m), 0.0),
        _TermValue(
            "rhs",
            coef.value * sums.value + same * weights.second_same + cross * weights.second_cross,
            coef.value * sums.est_error,
        ),
    ]
    return _build_report(
        InequalityName.PACHPATTE2, alpha, iv, shape, terms,
        ascending=shape is Shape.CONVEX, panels_used=sums.panels_used,
        coef_branch=coef.branch, asserted=not lax,
    )


def run_check(
    name: InequalityName | str,
    u: FunctionSpec,
    alpha: FracOrder,
    iv: Interval,
    cfg: QuadratureConfig | None = None,
    *,
    partner: FunctionSpec | None = None,
    weight: WeightSpec | None = None,
    strict: bool = False,
    lax: bool = False,
) -> InequalityReport:
    """Dispatch to the named check."""
    match InequalityName(name):
        case InequalityName.HH:
            return check_hermite_hadamard(u, alpha, iv, cfg, strict=strict)
        case InequalityName.FEJER:
            if weight is None:
                raise DomainError("the Fejer check needs a weight")
            return check_fejer(u, weight, alpha, iv, cfg)
        case InequalityName.DA:
            return check_dragomir_agarwal(u, alpha, iv, cfg)
        case InequalityName.PACHPATTE1 | InequalityName.PACHPATTE2 as which:
            if partner is None:
                raise DomainError(f"the {which} check needs a partner function v")
            check = (
                check_pachpatte_first if which is InequalityName.PACHPATTE1
                else check_pachpatte_second
            )
            return check(u, partner, alpha, iv, cfg, lax=lax)
