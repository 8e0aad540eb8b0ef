"""The parameter pair (α, [a, b]) that every formula is indexed by."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .base import DomainError


@dataclass(frozen=True, slots=True)
class FracOrder:
    """Order α of the exponential-kernel fractional integral.

    0 < α ≤ 1. α = 1 is the classical branch where the kernel is identically 1.
    """

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha) or not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}")

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0

    @property
    def decay_rate(self) -> float:
        """Kernel decay rate (1 − α)/α, exactly 0 when α = 1."""
        if self.is_classical:
            return 0.0
        return (1.0 - self.alpha) / self.alpha

    @property
    def layer_width(self) -> float:
        """Length scale α/(1 − α) of the kernel's boundary layer (inf at α = 1)."""
        if self.is_classical:
            return math.inf
        return self.alpha / (1.0 - self.alpha)

    def __float__(self) -> float:
        return self.alpha


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DomainError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def mirror(self, x: float) -> float:
        """Reflection x ↦ a + b − x."""
        return self.a + self.b - x

    def grid(self, n: int) -> NDArray[np.float64]:
        """n equally spaced points including both endpoints."""
        return np.linspace(self.a, self.b, n)

    def shifted(self, delta: float) -> Interval:
        return Interval(self.a + delta, self.b + delta)

    def __str__(self) -> str:
        return f"[{self.a:g}, {self.b:g}]"
