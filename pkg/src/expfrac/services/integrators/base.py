"""Configuration and result types shared by the integrators."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from expfrac.config import MAX_SUBDIVISIONS_LIMIT, Settings, get_settings

Integrand = Callable[[float], float]


class QuadratureConfig(BaseModel):
    """Tolerances and depth limit governing all numerical integration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    abs_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    rel_tol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    max_subdivisions: int = Field(default=1000, gt=0, le=MAX_SUBDIVISIONS_LIMIT)

    @classmethod
    def from_settings(cls, settings: Settings | None = None) -> QuadratureConfig:
        settings = settings or get_settings()
        return cls(
            abs_tol=settings.abs_tol,
            rel_tol=settings.rel_tol,
            max_subdivisions=settings.max_subdivisions,
        )

    def target(self, value: float) -> float:
        """Error target max(abs_tol, rel_tol·|value|)."""
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True, slots=True)
class QuadratureResult:
    value: float
    est_error: float
    panels_used: int


def interior_points(a: float, b: float, candidates: Iterable[float]) -> tuple[float, ...]:
    """Sorted distinct candidates strictly inside (a, b)."""
    eps = 1e-12 * (b - a)
    return tuple(sorted({float(p) for p in candidates if a + eps < p < b - eps}))

