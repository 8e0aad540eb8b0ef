"""Numerical integrators: adaptive production quadrature and the brute-force oracle."""

from .adaptive import AdaptiveIntegrator
from .base import QuadratureConfig, QuadratureResult
from .oracle import OracleResult, brute_frac, brute_integral

__all__ = [
    "AdaptiveIntegrator",
    "OracleResult",
    "QuadratureConfig",
    "QuadratureResult",
    "brute_frac",
    "brute_integral",
]
