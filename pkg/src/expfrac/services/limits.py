"""Convergence studies toward the α = 1 (classical) and α → 0 (identity) limits.

Also tabulates the kernel constants normalized by their classical values.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import structlog

from expfrac.domain import (
    Branch,
    DomainError,
    Evaluable,
    FracOrder,
    FunctionSpec,
    InequalityName,
    InequalityReport,
    Interval,
    Side,
    WeightSpec,
)

from .fractional import left_integral, right_integral
from .inequalities import run_check
from .integrators import QuadratureConfig
from .kernel import coef_dragomir, coef_midpoint, kernel_scale, pachpatte_weights

logger = structlog.get_logger()

# The term of each chain that carries the fractional integral or constant
TRACKED_TERM: dict[InequalityName, str] = {
    InequalityName.HH: "mid",
    InequalityName.FEJER: "mid",
    InequalityName.DA: "bound",
    InequalityName.PACHPATTE1: "rhs",
    InequalityName.PACHPATTE2: "rhs",
}


@dataclass(frozen=True, slots=True)
class LimitRow:
    alpha: float
    value: float
    classical: float
    abs_error: float
    # Error allowance of this row; rows closer than this are not ordered
    tolerance: float = 0.0


@dataclass(frozen=True)
class LimitSweep:
    inequality: InequalityName | None
    term: str
    rows: list[LimitRow]
    reports: list[InequalityReport] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        """True when abs_error is nonincreasing up to each row's tolerance."""
        return all(
            nxt.abs_error <= cur.abs_error + cur.tolerance + nxt.tolerance
            for cur, nxt in zip(self.rows, self.rows[1:], strict=False)
        )


def _check_increasing(alphas: Sequence[float]) -> list[FracOrder]:
    orders = [FracOrder(a) for a in alphas]
    if any(nxt.alpha <= cur.alpha for cur, nxt in zip(orders, orders[1:], strict=False)):
        raise DomainError(f"alphas must be strictly increasing, got {list(alphas)}")
    return orders


def classical_limit_sweep(
    checker: InequalityName | str,
    u: FunctionSpec,
    iv: Interval,
    alphas: Sequence[float],
    cfg: QuadratureConfig | None = None,
    *,
    partner: FunctionSpec | None = None,
    weight: WeightSpec | None = None,
) -> LimitSweep:
    """Run one checker along alphas increasing toward 1 plus the exact α = 1 branch.

    The classical value of the tracked term is the one the α = 1 report
    produces; every row records its distance from that value.
    """
    name = InequalityName(checker)
    term = TRACKED_TERM[name]
    orders = [o for o in _check_increasing(alphas) if not o.is_classical]
    classical_report = run_check(
        name, u, FracOrder(1.0), iv, cfg, partner=partner, weight=weight
    )
    classical = classical_report.term(term)
    reports = []
    rows = []
    for order in orders:
        report = run_check(name, u, order, iv, cfg, partner=partner, weight=weight)
        value = report.term(term)
        reports.append(report)
        rows.append(LimitRow(order.alpha, value, classical, abs(value - classical), report.margin))
    reports.append(classical_report)
    rows.append(LimitRow(1.0, classical, classical, 0.0, classical_report.margin))
    sweep = LimitSweep(name, term, rows, reports)
    logger.info(
        "classical_limit_sweep",
        inequality=str(name),
        term=term,
        alphas=len(rows),
        monotone=sweep.monotone,
    )
    return sweep


def identity_limit(
    u: Evaluable,
    x: float,
    iv: Interval,
    alphas: Sequence[float],
    cfg: QuadratureConfig | None = None,
    *,
    side: Side | str = Side.LEFT,
) -> LimitSweep:
    """Kernel-mass-normalized fractional integral at x as α decreases toward 0.

    I^α_a u(x) / I^α_a 1(x) = (1 − α)/(1 − e^{−k(x − a)}) · I^α_a u(x), with
    k = (1 − α)/α, tends to u(x) as α → 0 (mirrored for the right side).
    Rows are ordered by decreasing α so that the error column should shrink.
    """
    if not iv.a <= x <= iv.b:
        raise DomainError(f"x = {x} lies outside {iv}")
    orders = sorted(
        (o for o in _check_increasing(sorted(alphas)) if not o.is_classical),
        key=lambda o: -o.alpha,
    )
    side = Side(side)
    target = float(u(x))
    rows = []
    for order in orders:
        k = order.decay_rate
        if side is Side.LEFT:
            part = left_integral(u, order, iv.a, x, cfg)
            reach = x - iv.a
        else:
            part = right_integral(u, order, x, iv.b, cfg)
            reach = iv.b - x
        # I^α 1 over the same reach
        mass = -math.expm1(-k * reach) / (1.0 - order.alpha)
        value = part.value / mass
        rows.append(LimitRow(order.alpha, value, target, abs(value - target), part.est_error / mass))
    return LimitSweep(None, f"{side}_normalized", rows)


@dataclass(frozen=True, slots=True)
class ConstantRow:
    """Kernel constants divided by their classical values; all tend to 1 as A → 0."""

    A: float
    alpha: float
    midpoint_norm: float
    dragomir_norm: float
    p2_norm: float
    p1_second_norm: float
    p1_first_norm: float
    p2_second_norm: float
    branch: Branch

    def as_row(self) -> list[object]:
        return [
            self.A, self.alpha, self.midpoint_norm, self.dragomir_norm, self.p2_norm,
            self.p1_second_norm, self.p1_first_norm, self.p2_second_norm, str(self.branch),
        ]


def order_for_scale(A: float, iv: Interval) -> FracOrder:
    """The α that gives kernel scale A on iv: α = (b − a)/(b − a + A)."""
    if not math.isfinite(A) or A < 0.0:
        raise DomainError(f"kernel scale must be finite and nonnegative, got {A!r}")
    return FracOrder(iv.length / (iv.length + A))


def normalized_constants(alpha: FracOrder, iv: Interval) -> ConstantRow:
    """coef_midpoint·2(b−a), coef_dragomir·8/(b−a) and the Pachpatte weights over 1/3, 1/6."""
    A = kernel_scale(alpha, iv)
    midpoint = coef_midpoint(alpha, iv)
    weights = pachpatte_weights(A)
    return ConstantRow(
        A=A,
        alpha=alpha.alpha,
        midpoint_norm=midpoint.value * 2.0 * iv.length,
        dragomir_norm=coef_dragomir(alpha, iv).value * 8.0 / iv.length,
        p2_norm=6.0 * weights.first_cross,
        p1_second_norm=3.0 * weights.second_cross,
        p1_first_norm=3.0 * weights.first_same,
        p2_second_norm=6.0 * weights.second_same,
        branch=midpoint.branch,
    )


def constants_table(
    iv: Interval,
    *,
    scales: Sequence[float] | None = None,
    alphas: Sequence[float] | None = None,
    include_classical: bool = False,
) -> list[ConstantRow]:
    """Rows for an A grid (realized on iv) or an alpha grid, in the given order."""
    if scales is not None:
        orders = [order_for_scale(A, iv) for A in scales]
    else:
        orders = [FracOrder(a) for a in alphas or ()]
    if include_classical and not any(o.is_classical for o in orders):
        orders.insert(0, FracOrder(1.0))
    return [normalized_constants(o, iv) for o in orders]
