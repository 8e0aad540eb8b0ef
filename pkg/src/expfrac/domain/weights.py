"""Symmetric nonnegative weights for the Fejér inequality."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from .base import DomainError
from .functions import Exponential, FunctionSpec, PowerAbs, Quadratic
from .parameters import Interval


class WeightSpec(BaseModel):
    """v(x) = g(|x − (a + b)/2|) for a profile g on [0, (b − a)/2].

    On the mirrored grid the nodes x_k and a + b − x_k share one distance
    value, so both are evaluated by the same floating-point computation.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    profile: FunctionSpec
    a: float
    b: float

    @model_validator(mode="after")
    def _check_interval(self) -> WeightSpec:
        Interval(self.a, self.b)
        return self

    @classmethod
    def constant(cls, iv: Interval, value: float = 1.0) -> WeightSpec:
        return cls(profile=Quadratic(c0=value), a=iv.a, b=iv.b)

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.profile(np.abs(np.asarray(x, dtype=np.float64) - self.midpoint))

    @property
    def breakpoints(self) -> tuple[float, ...]:
        m = self.midpoint
        kinks = {m}
        for t in self.profile.breakpoints:
            if t > 0.0:
                kinks.update((m - t, m + t))
        return tuple(sorted(kinks))

    def mirrored_grid(
        self, grid_n: int = 1001
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Nodes x with x[n − 1 − k] := a + b − x[k], and their distances to m.

        The distance array is a palindrome: mirrored nodes carry the same value.
        """
        if grid_n < 2:
            raise DomainError(f"grid_n must be at least 2, got {grid_n}")
        m = self.midpoint
        left = np.linspace(self.a, m, (grid_n + 1) // 2, endpoint=grid_n % 2 == 1)
        x = _mirror(left, grid_n, (self.a + self.b) - left)
        dist = m - left
        return x, _mirror(dist, grid_n)

    def mirrored_values(
        self, grid_n: int = 1001
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """(x, v(x)) on the mirrored grid; the profile is evaluated once per distance."""
        x, dist = self.mirrored_grid(grid_n)
        half = (grid_n + 1) // 2
        values = np.asarray(self.profile(dist[:half]), dtype=np.float64)
        return x, _mirror(values, grid_n)

    def symmetry_defect(self, grid_n: int = 1001) -> float:
        """max |v(a + b − x_k) − v(x_k)| over the mirrored grid."""
        _, values = self.mirrored_values(grid_n)
        return float(np.max(np.abs(values[::-1] - values)))

    def minimum(self, grid_n: int = 1001) -> float:
        return float(np.min(self.mirrored_values(grid_n)[1]))


def _mirror(
    head: NDArray[np.float64], grid_n: int, reflected: NDArray[np.float64] | None = None
) -> NDArray[np.float64]:
    """head followed by its reflection; an odd grid keeps the middle node once."""
    tail = head if reflected is None else reflected
    tail = tail[-2::-1] if grid_n % 2 == 1 else tail[::-1]
    return np.concatenate([head, tail])


# Profile kinds drawn by make_weight
_WEIGHT_KINDS = ("constant", "linear", "quadratic", "bump", "power")


def make_weight(seed: int, iv: Interval) -> WeightSpec:
    """Seeded symmetric weight on iv; kind 0 is the constant weight v ≡ 1."""
    rng = np.random.default_rng(seed)
    kind = _WEIGHT_KINDS[int(rng.integers(len(_WEIGHT_KINDS)))]
    half = 0.5 * iv.length
    profile: FunctionSpec
    match kind:
        case "constant":
            profile = Quadratic(c0=1.0)
        case "linear":
            # 1 + β·t stays positive on [0, half] for β > −1/half
            beta = float(rng.uniform(-0.9, 3.0)) / half
            profile = PowerAbs(center=0.0, power=1.0, scale=beta, offset=1.0)
        case "quadratic":
            profile = Quadratic(c2=float(rng.uniform(-0.9, 3.0)) / half**2, c0=1.0)
        case "bump":
            profile = Exponential(rate=-float(rng.uniform(0.5, 4.0)) / half, scale=1.0)
        case _:
            power = float(rng.uniform(1.0, 4.0))
            profile = PowerAbs(
                center=0.0, power=power, scale=float(rng.uniform(0.1, 2.0)) / half**power,
                offset=float(rng.uniform(0.0, 1.0)),
            )
    return WeightSpec(profile=profile, a=iv.a, b=iv.b)
