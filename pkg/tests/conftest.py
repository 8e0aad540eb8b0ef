"""Shared test fixtures and configuration."""

from collections.abc import Generator

import pytest

from expfrac.config import reset_settings
from expfrac.domain import Exponential, FracOrder, Interval, PowerAbs, Quadratic
from expfrac.domain.corpus import convex_corpus
from expfrac.services.integrators import QuadratureConfig

# Intervals every acceptance property is checked on
STANDARD_INTERVALS = (Interval(0.0, 1.0), Interval(-2.0, 3.0), Interval(5.0, 5.01))
ALPHA_GRID = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch: pytest.MonkeyPatch) -> Generator[None, None, None]:
    """Fresh settings per test; ignore any EXPFRAC_* variables from the shell."""
    for var in ("ABS_TOL", "REL_TOL", "MAX_SUBDIVISIONS", "VERDICT_FLOOR", "WORKERS"):
        monkeypatch.delenv(f"EXPFRAC_{var}", raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def quad() -> QuadratureConfig:
    """Default quadrature configuration."""
    return QuadratureConfig()


@pytest.fixture
def unit() -> Interval:
    return Interval(0.0, 1.0)


@pytest.fixture
def half() -> FracOrder:
    return FracOrder(0.5)


@pytest.fixture
def square() -> Quadratic:
    """u(x) = x²."""
    return Quadratic(c2=1.0)


@pytest.fixture
def identity() -> Quadratic:
    """u(x) = x."""
    return Quadratic(c1=1.0)


@pytest.fixture
def kink() -> PowerAbs:
    """u(x) = |x − ½|."""
    return PowerAbs(center=0.5, power=1.0)


@pytest.fixture
def exp_fn() -> Exponential:
    """u(x) = eˣ."""
    return Exponential(rate=1.0)


@pytest.fixture
def small_corpus(unit: Interval):
    return convex_corpus(seed=7, size=8, iv=unit)
