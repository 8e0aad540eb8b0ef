"""Base classes, enums and protocols shared by the domain models."""

from enum import StrEnum
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray


class ExpfracError(Exception):
    """Base exception for all expfrac errors."""

    pass


class DomainError(ExpfracError):
    """Raised when parameters or evaluation points are outside the contract."""

    pass


class ShapeUnknown(ExpfracError):  # noqa: N818
    """Raised when a convexity certificate is missing or does not match."""

    pass


class NoDerivative(ExpfracError):  # noqa: N818
    """Raised when a derivative is requested from a kinked family."""

    pass


class WeightInvalid(ExpfracError):  # noqa: N818
    """Raised when a Fejér weight fails the symmetry or nonnegativity screen."""

    pass


class NegativeFunction(ExpfracError):  # noqa: N818
    """Raised when a Pachpatte factor is negative somewhere on the interval."""

    pass


class HypothesisViolation(ExpfracError):  # noqa: N818
    """Raised in strict mode when u > 0 or 0 <= a fails."""

    pass


class IntegrationError(ExpfracError):
    """Base exception for quadrature failures."""

    pass


class NonConvergent(IntegrationError):  # noqa: N818
    """Raised when an integrator cannot meet its error target."""

    pass


class ConfigError(ExpfracError):
    """Raised when a run configuration cannot be parsed or validated."""

    pass


class Shape(StrEnum):
    """Convexity certificate of a test function."""

    CONVEX = "convex"
    CONCAVE = "concave"
    UNKNOWN = "unknown"

    def flipped(self) -> "Shape":
        """Shape of the negated function."""
        if self is Shape.CONVEX:
            return Shape.CONCAVE
        if self is Shape.CONCAVE:
            return Shape.CONVEX
        return Shape.UNKNOWN


class Side(StrEnum):
    """Which fractional integral: left (I^α_a) or right (I^α_b)."""

    LEFT = "left"
    RIGHT = "right"


class Branch(StrEnum):
    """Evaluation path of a cancellation-prone constant."""

    DIRECT = "direct"
    SERIES = "series"


class Evaluable(Protocol):
    """Protocol for anything the integrators can integrate.

    Contract:
    - Evaluation accepts scalars and numpy arrays and is elementwise
    - Evaluation is pure, so concurrent calls are safe
    - `breakpoints` lists the kinks; integrators use them as panel boundaries
    """

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        """Evaluate at x (scalar or array)."""
        ...

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the function is not differentiable."""
        ...
