"""Certified convex/concave test functions.

Each family is a frozen pydantic model, so specs validate on construction and
serialize losslessly to the CLI config format and into reports. The convexity
certificate comes from the construction (sign of the leading coefficient,
nondecreasing slopes, ...), not from sampling; `check_convexity` is the
independent screen.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import Annotated, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from .base import DomainError, NoDerivative, Shape
from .parameters import Interval

# Scale tolerance of the midpoint screen
CONVEXITY_TOLERANCE = 1e-12


class Family(StrEnum):
    QUADRATIC = "quadratic"
    POWER_ABS = "power_abs"
    EXPONENTIAL = "exponential"
    PIECEWISE_LINEAR = "piecewise_linear"
    NEGATED = "negated"


def _as_array(x: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(x, dtype=np.float64)


class _FunctionBase(BaseModel):
    """Shared behaviour of all function families."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # False strips the certificate: shape reports UNKNOWN
    certified: bool = True

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        raise NotImplementedError

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        raise NoDerivative(f"{self.family_name} has no derivative")

    @property
    def family_name(self) -> str:
        return str(getattr(self, "family"))

    @property
    def natural_shape(self) -> Shape:
        raise NotImplementedError

    @property
    def shape(self) -> Shape:
        return self.natural_shape if self.certified else Shape.UNKNOWN

    @property
    def has_derivative(self) -> bool:
        return False

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def scaled(self, c: float) -> FunctionSpec:
        raise NotImplementedError

    def shifted(self, d: float) -> FunctionSpec:
        raise NotImplementedError


class Quadratic(_FunctionBase):
    """c2·x² + c1·x + c0."""

    family: Literal["quadratic"] = "quadratic"
    c2: float = 0.0
    c1: float = 0.0
    c0: float = 0.0

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        x = _as_array(x)
        return (self.c2 * x + self.c1) * x + self.c0

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        return 2.0 * self.c2 * _as_array(x) + self.c1

    @property
    def natural_shape(self) -> Shape:
        return Shape.CONVEX if self.c2 >= 0.0 else Shape.CONCAVE

    @property
    def has_derivative(self) -> bool:
        return True

    def scaled(self, c: float) -> FunctionSpec:
        return self.model_copy(update={"c2": c * self.c2, "c1": c * self.c1, "c0": c * self.c0})

    def shifted(self, d: float) -> FunctionSpec:
        return self.model_copy(update={"c0": self.c0 + d})


class PowerAbs(_FunctionBase):
    """scale·|x − center|^power + offset, power ≥ 1."""

    family: Literal["power_abs"] = "power_abs"
    center: float = 0.0
    power: float = Field(default=1.0, ge=1.0)
    scale: float = 1.0
    offset: float = 0.0

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.scale * np.abs(_as_array(x) - self.center) ** self.power + self.offset

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        if not self.has_derivative:
            raise NoDerivative(f"power_abs with power {self.power} has a kink at {self.center}")
        dx = _as_array(x) - self.center
        return self.scale * self.power * np.abs(dx) ** (self.power - 1.0) * np.sign(dx)

    @property
    def natural_shape(self) -> Shape:
        return Shape.CONVEX if self.scale >= 0.0 else Shape.CONCAVE

    @property
    def has_derivative(self) -> bool:
        return self.power > 1.0

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.center,)

    def scaled(self, c: float) -> FunctionSpec:
        return self.model_copy(update={"scale": c * self.scale, "offset": c * self.offset})

    def shifted(self, d: float) -> FunctionSpec:
        return self.model_copy(update={"offset": self.offset + d})


class Exponential(_FunctionBase):
    """scale·exp(rate·(x − center)) + offset."""

    family: Literal["exponential"] = "exponential"
    rate: float = 1.0
    scale: float = 1.0
    center: float = 0.0
    offset: float = 0.0

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.scale * np.exp(self.rate * (_as_array(x) - self.center)) + self.offset

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.scale * self.rate * np.exp(self.rate * (_as_array(x) - self.center))

    @property
    def natural_shape(self) -> Shape:
        return Shape.CONVEX if self.scale >= 0.0 else Shape.CONCAVE

    @property
    def has_derivative(self) -> bool:
        return True

    def scaled(self, c: float) -> FunctionSpec:
        return self.model_copy(update={"scale": c * self.scale, "offset": c * self.offset})

    def shifted(self, d: float) -> FunctionSpec:
        return self.model_copy(update={"offset": self.offset + d})


class PiecewiseLinear(_FunctionBase):
    """Continuous piecewise-linear function, convex by construction.

    `slopes[i]` applies from `breaks[i]` up to the next break; the first slope
    extends to −∞ and the last to +∞. `base` is the value at `breaks[0]`.
    """

    family: Literal["piecewise_linear"] = "piecewise_linear"
    breaks: tuple[float, ...]
    slopes: tuple[float, ...]
    base: float = 0.0

    @model_validator(mode="after")
    def _check_convex_construction(self) -> PiecewiseLinear:
        if len(self.breaks) == 0 or len(self.breaks) != len(self.slopes):
            raise ValueError("breaks and slopes must be nonempty and of equal length")
        if any(b1 <= b0 for b0, b1 in zip(self.breaks, self.breaks[1:], strict=False)):
            raise ValueError("breaks must be strictly increasing")
        if any(s1 < s0 for s0, s1 in zip(self.slopes, self.slopes[1:], strict=False)):
            raise ValueError("slopes must be nondecreasing")
        return self

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        x = _as_array(x)
        breaks = np.asarray(self.breaks)
        slopes = np.asarray(self.slopes)
        value = self.base + slopes[0] * (x - breaks[0])
        if len(breaks) > 1:
            hinges = np.maximum(0.0, x[..., np.newaxis] - breaks[1:])
            value = value + hinges @ np.diff(slopes)
        return value

    @property
    def natural_shape(self) -> Shape:
        return Shape.CONVEX

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.breaks

    def scaled(self, c: float) -> FunctionSpec:
        if c < 0.0:
            return Negated(inner=self.scaled(-c))
        return self.model_copy(
            update={"slopes": tuple(c * s for s in self.slopes), "base": c * self.base}
        )

    def shifted(self, d: float) -> FunctionSpec:
        return self.model_copy(update={"base": self.base + d})


class Negated(_FunctionBase):
    """−inner(x); flips the certificate."""

    family: Literal["negated"] = "negated"
    inner: FunctionSpec

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return -self.inner(x)

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        return -self.inner.derivative(x)

    @property
    def natural_shape(self) -> Shape:
        return self.inner.shape.flipped()

    @property
    def has_derivative(self) -> bool:
        return self.inner.has_derivative

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.inner.breakpoints

    def scaled(self, c: float) -> FunctionSpec:
        return Negated(inner=self.inner.scaled(c))

    def shifted(self, d: float) -> FunctionSpec:
        return Negated(inner=self.inner.shifted(-d))


FunctionSpec = Annotated[
    Quadratic | PowerAbs | Exponential | PiecewiseLinear | Negated,
    Field(discriminator="family"),
]

Negated.model_rebuild()

FUNCTION_ADAPTER: TypeAdapter[FunctionSpec] = TypeAdapter(FunctionSpec)


@dataclass(frozen=True)
class Product:
    """Pointwise product u·v, used for the weighted and Pachpatte integrands."""

    u: FunctionSpec
    v: Callable[[ArrayLike], NDArray[np.float64]]

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.u(x) * self.v(x)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        extra = getattr(self.v, "breakpoints", ())
        return tuple(sorted({*self.u.breakpoints, *extra}))


def evaluate(f: FunctionSpec, x: ArrayLike) -> NDArray[np.float64]:
    """Function value at x; every family is defined on the whole real line."""
    x = _as_array(x)
    if not np.all(np.isfinite(x)):
        raise DomainError("evaluation points must be finite")
    return f(x)


def evaluate_derivative(f: FunctionSpec, x: ArrayLike) -> NDArray[np.float64]:
    """u'(x) for the differentiable families."""
    if not f.has_derivative:
        raise NoDerivative(f"{f.family_name} function has kinks; no derivative available")
    x = _as_array(x)
    if not np.all(np.isfinite(x)):
        raise DomainError("evaluation points must be finite")
    return f.derivative(x)


def negated(f: FunctionSpec) -> FunctionSpec:
    """−f with the certificate flipped."""
    if isinstance(f, Negated):
        return f.inner
    return Negated(inner=f)


def midpoint_convex(
    fn: Callable[[ArrayLike], NDArray[np.float64]], iv: Interval, grid_n: int
) -> bool:
    """Midpoint-inequality screen on adjacent grid pairs (necessary for convexity only)."""
    if grid_n < 3:
        raise DomainError(f"grid_n must be at least 3, got {grid_n}")
    x = iv.grid(grid_n)
    y = np.asarray(fn(x), dtype=np.float64)
    mid = np.asarray(fn(0.5 * (x[:-1] + x[1:])), dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(y))))
    return bool(np.all(mid <= 0.5 * (y[:-1] + y[1:]) + CONVEXITY_TOLERANCE * scale))


def check_convexity(f: FunctionSpec, iv: Interval, grid_n: int = 1001) -> bool:
    return midpoint_convex(f, iv, grid_n)


def grid_minimum(f: Callable[[ArrayLike], NDArray[np.float64]], iv: Interval, grid_n: int = 1001) -> float:
    return float(np.min(f(iv.grid(grid_n))))
