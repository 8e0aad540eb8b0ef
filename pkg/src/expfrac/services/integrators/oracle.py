"""Brute-force reference integrator.

Composite Simpson on uniform grids that double until two successive levels
agree. It shares no code with the adaptive integrator, so it can catch that
integrator's mistakes; it is slow and has no error estimate beyond the
Richardson delta.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from expfrac.domain import Evaluable, FracOrder, Interval, NonConvergent, Side

logger = structlog.get_logger()

INITIAL_INTERVALS = 16
MAX_INTERVALS = 2**22

ArrayFunction = Callable[[NDArray[np.float64]], ArrayLike]


@dataclass(frozen=True, slots=True)
class OracleResult:
    """Finest-level value; richardson_delta is |finest − previous level|."""

    value: float
    grid_n: int
    richardson_delta: float
    # Deltas of every doubling, coarsest first
    deltas: tuple[float, ...] = ()


def brute_integral(f: ArrayFunction, a: float, b: float, target: float) -> OracleResult:
    """∫_a^b f by composite Simpson with grid doubling.

    f must accept numpy arrays. Stops once the Richardson delta drops below
    target; raises NonConvergent when the grid would exceed MAX_INTERVALS.
    """
    if not target > 0.0:
        raise ValueError(f"target must be positive, got {target}")
    if not a < b:
        raise ValueError(f"brute_integral requires a < b, got [{a}, {b}]")
    x = np.linspace(a, b, INITIAL_INTERVALS + 1)
    y = np.asarray(f(x), dtype=np.float64)
    previous = float(integrate.simpson(y, x=x))
    deltas: list[float] = []
    while len(x) - 1 < MAX_INTERVALS:
        # Reuse the coarse samples; only the new midpoints are evaluated
        mid = 0.5 * (x[:-1] + x[1:])
        fine_x = np.empty(2 * len(x) - 1)
        fine_y = np.empty_like(fine_x)
        fine_x[0::2], fine_x[1::2] = x, mid
        fine_y[0::2], fine_y[1::2] = y, np.asarray(f(mid), dtype=np.float64)
        x, y = fine_x, fine_y
        value = float(integrate.simpson(y, x=x))
        delta = abs(value - previous)
        deltas.append(delta)
        if delta < target:
            return OracleResult(value, len(x) - 1, delta, tuple(deltas))
        previous = value
    logger.warning("oracle_not_converged", a=a, b=b, intervals=len(x) - 1, delta=deltas[-1])
    raise NonConvergent(
        f"oracle on [{a}, {b}] stalled at delta {deltas[-1]:.3e} with {len(x) - 1} intervals"
    )


@dataclass(frozen=True)
class KernelIntegrand:
    """s ↦ (1/α)·exp(−k·dist(s))·u(s), dist measured from b (left) or a (right)."""

    u: Evaluable
    alpha: FracOrder
    iv: Interval
    side: Side

    def __call__(self, s: ArrayLike) -> NDArray[np.float64]:
        s = np.asarray(s, dtype=np.float64)
        dist = self.iv.b - s if self.side is Side.LEFT else s - self.iv.a
        return np.exp(-self.alpha.decay_rate * dist) * self.u(s) / self.alpha.alpha

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.u.breakpoints


def brute_frac(
    u: Evaluable, alpha: FracOrder, iv: Interval, side: Side | str, target: float
) -> OracleResult:
    """I^α_a u(b) (left) or I^α_b u(a) (right) by brute force."""
    return brute_integral(KernelIntegrand(u, alpha, iv, Side(side)), iv.a, iv.b, target)
