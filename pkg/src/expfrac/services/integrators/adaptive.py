"""Adaptive Gauss-Kronrod quadrature (QUADPACK through scipy)."""

from __future__ import annotations

import structlog
from scipy import integrate

from expfrac.domain import NonConvergent

from .base import Integrand, QuadratureConfig, QuadratureResult, interior_points

logger = structlog.get_logger()


class AdaptiveIntegrator:
    """Globally adaptive 21-point Gauss-Kronrod quadrature.

    Panels are bisected where the embedded Gauss/Kronrod pair disagrees most,
    until max(abs_tol, rel_tol·|value|) is met or max_subdivisions is spent.
    Caller-supplied points become initial panel boundaries.
    """

    def __init__(self, cfg: QuadratureConfig | None = None):
        self.cfg = cfg or QuadratureConfig()

    @property
    def name(self) -> str:
        return "adaptive"

    def integrate(
        self, f: Integrand, a: float, b: float, points: tuple[float, ...] = ()
    ) -> QuadratureResult:
        cfg = self.cfg
        inner = interior_points(a, b, points)
        # QUADPACK needs room for the initial panels
        inner = inner[: max(0, cfg.max_subdivisions - 2)]
        result = integrate.quad(
            f,
            a,
            b,
            epsabs=cfg.abs_tol,
            epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions,
            points=inner or None,
            full_output=1,
        )
        if len(result) > 3:
            value, abserr, info, message = result[:4]
            logger.warning(
                "quadrature_not_converged",
                a=a,
                b=b,
                value=value,
                est_error=abserr,
                panels=info.get("last"),
                message=message,
            )
            raise NonConvergent(
                f"quadrature on [{a}, {b}] missed its target: {message.strip()}"
            )
        value, abserr, info = result
        return QuadratureResult(float(value), float(abserr), int(info["last"]))
