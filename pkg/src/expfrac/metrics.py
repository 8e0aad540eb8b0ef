"""Prometheus metrics definitions for expfrac."""

from collections.abc import Callable
from functools import wraps
from typing import ParamSpec, TypeVar

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

from expfrac.domain import ExpfracError, IntegrationError

P = ParamSpec("P")
R = TypeVar("R")

# Dedicated registry so runs can dump exactly their own metrics
registry = CollectorRegistry()

checks_total = Counter(
    "expfrac_checks_total",
    "Inequality checks completed",
    ["inequality", "verdict"],
    registry=registry,
)

check_failures = Counter(
    "expfrac_check_failures_total",
    "Inequality checks that raised before producing a verdict",
    ["inequality", "error_type"],
    registry=registry,
)

quadrature_duration = Histogram(
    "expfrac_quadrature_duration_seconds",
    "Time spent in one fractional-integral quadrature",
    ["side"],  # left, right, plain
    registry=registry,
)

quadrature_panels = Histogram(
    "expfrac_quadrature_panels",
    "Panels used by one adaptive quadrature",
    ["side"],
    buckets=(1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 5000, 65536),
    registry=registry,
)

quadrature_failures = Counter(
    "expfrac_quadrature_failures_total",
    "Quadratures that failed to meet their error target",
    ["side"],
    registry=registry,
)


def track_quadrature(side: str) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Decorator for timing quadrature calls and counting failures.

    Example:
        @track_quadrature("left")
        def left_integral(u, alpha, a, x, cfg): ...
    """

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            with quadrature_duration.labels(side=side).time():
                try:
                    result = func(*args, **kwargs)
                except IntegrationError:
                    quadrature_failures.labels(side=side).inc()
                    raise
            panels = getattr(result, "panels_used", None)
            if panels is not None:
                quadrature_panels.labels(side=side).observe(panels)
            return result

        return wrapper

    return decorator


def track_check(inequality: str) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Decorator counting inequality checks by verdict, and failures by error type."""

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            try:
                report = func(*args, **kwargs)
            except ExpfracError as e:
                check_failures.labels(inequality=inequality, error_type=type(e).__name__).inc()
                raise
            checks_total.labels(inequality=inequality, verdict=str(getattr(report, "verdict", "unknown"))).inc()
            return report

        return wrapper

    return decorator


def write_metrics(path: str) -> None:
    """Write the registry in Prometheus text exposition format."""
    write_to_textfile(path, registry)
