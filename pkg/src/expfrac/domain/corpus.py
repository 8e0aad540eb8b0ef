"""Seeded corpora of certified convex functions."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .functions import (
    Exponential,
    Family,
    FunctionSpec,
    PiecewiseLinear,
    PowerAbs,
    Quadratic,
    grid_minimum,
    negated,
)
from .parameters import Interval

CONVEX_FAMILIES: tuple[Family, ...] = (
    Family.QUADRATIC,
    Family.POWER_ABS,
    Family.EXPONENTIAL,
    Family.PIECEWISE_LINEAR,
)

# |u'| is convex for these, as Dragomir-Agarwal requires
SMOOTH_FAMILIES: tuple[Family, ...] = (Family.QUADRATIC, Family.EXPONENTIAL)

# Offset above zero for nonnegative variants
NONNEG_MARGIN = 0.1


@dataclass(frozen=True, slots=True)
class CorpusEntry:
    seed: int
    family: Family
    function: FunctionSpec


def _quadratic(rng: np.random.Generator, iv: Interval) -> Quadratic:
    # One draw in five is nearly linear
    if rng.random() < 0.2:
        c2 = float(rng.uniform(1e-6, 1e-4))
    else:
        c2 = float(rng.uniform(0.1, 3.0))
    vertex = float(rng.uniform(iv.a - 0.5 * iv.length, iv.b + 0.5 * iv.length))
    return Quadratic(c2=c2, c1=-2.0 * c2 * vertex, c0=float(rng.uniform(-1.0, 1.0)))


def _power_abs(rng: np.random.Generator, iv: Interval) -> PowerAbs:
    power = 1.0 if rng.random() < 0.3 else float(rng.uniform(1.5, 4.0))
    return PowerAbs(
        center=float(rng.uniform(iv.a, iv.b)),
        power=power,
        scale=float(rng.uniform(0.2, 2.0)),
        offset=float(rng.uniform(-1.0, 1.0)),
    )


def _exponential(rng: np.random.Generator, iv: Interval) -> Exponential:
    # |rate|·(b − a)/2 ≤ 3 keeps values within e³ of the midpoint value
    rate = float(rng.uniform(0.2, 6.0)) / iv.length * float(rng.choice([-1.0, 1.0]))
    return Exponential(
        rate=rate,
        scale=float(rng.uniform(0.2, 2.0)),
        center=iv.midpoint,
        offset=float(rng.uniform(-1.0, 1.0)),
    )


def _piecewise_linear(rng: np.random.Generator, iv: Interval) -> PiecewiseLinear:
    k = int(rng.integers(2, 9))
    breaks = np.unique(rng.uniform(iv.a, iv.b, size=k))
    first = float(rng.uniform(-2.0, 2.0))
    increments = rng.uniform(0.0, 2.0, size=len(breaks) - 1)
    slopes = first + np.concatenate(([0.0], np.cumsum(increments)))
    return PiecewiseLinear(
        breaks=tuple(float(b) for b in breaks),
        slopes=tuple(float(s) for s in slopes),
        base=float(rng.uniform(-1.0, 1.0)),
    )


_GENERATORS = {
    Family.QUADRATIC: _quadratic,
    Family.POWER_ABS: _power_abs,
    Family.EXPONENTIAL: _exponential,
    Family.PIECEWISE_LINEAR: _piecewise_linear,
}


def random_convex(
    seed: int, family: Family | str, iv: Interval, *, nonneg: bool = False
) -> FunctionSpec:
    """Seeded certified-convex function of the given family, scaled to iv.

    With nonneg=True the function is lifted by a constant so that its grid
    minimum on iv is NONNEG_MARGIN, which keeps it convex.
    """
    family = Family(family)
    if family not in _GENERATORS:
        raise ValueError(f"no convex generator for family {family}")
    rng = np.random.default_rng(seed)
    f: FunctionSpec = _GENERATORS[family](rng, iv)
    if nonneg:
        low = grid_minimum(f, iv)
        if low < NONNEG_MARGIN:
            f = f.shifted(NONNEG_MARGIN - low)
    return f


def convex_corpus(
    seed: int,
    size: int,
    iv: Interval,
    families: Sequence[Family] = CONVEX_FAMILIES,
    *,
    nonneg: bool = False,
) -> list[CorpusEntry]:
    """Entry i uses seed + i and cycles through the families."""
    entries = []
    for i in range(size):
        family = families[i % len(families)]
        entries.append(
            CorpusEntry(seed + i, family, random_convex(seed + i, family, iv, nonneg=nonneg))
        )
    return entries


def concave_corpus(seed: int, size: int, iv: Interval) -> list[CorpusEntry]:
    """Negations of the convex corpus."""
    return [
        CorpusEntry(e.seed, Family.NEGATED, negated(e.function))
        for e in convex_corpus(seed, size, iv)
    ]
