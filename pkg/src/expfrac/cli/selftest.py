"""Reduced-scale invariant suite behind `expfrac selftest`."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import structlog
from numpy.typing import ArrayLike, NDArray

from expfrac.config import get_settings
from expfrac.domain import (
    SMOOTH_FAMILIES,
    Branch,
    ExpfracError,
    FracOrder,
    FunctionSpec,
    InequalityName,
    IntegrationError,
    Interval,
    Shape,
    Side,
    Verdict,
    WeightSpec,
)
from expfrac.domain.corpus import convex_corpus
from expfrac.services import (
    build_tasks,
    check_dragomir_agarwal,
    check_fejer,
    check_hermite_hadamard,
    dragomir_identity_residual,
    left_integral,
    monomial_closed_form,
    normalized_constants,
    order_for_scale,
    right_integral,
    run_sweep,
)
from expfrac.services.integrators import AdaptiveIntegrator, QuadratureConfig, brute_frac
from expfrac.services.kernel import (
    SERIES_THRESHOLD,
    coef_dragomir,
    coef_midpoint,
    dragomir_moments,
    kernel_scale,
    pachpatte_p1,
    pachpatte_p2,
    pachpatte_weights,
)

from .run_config import DEFAULT_ALPHAS, RunConfig

logger = structlog.get_logger()

INTERVALS = (Interval(0.0, 1.0), Interval(-2.0, 3.0), Interval(5.0, 5.01))
ORACLE_ALPHAS = (0.25, 0.5, 0.9)
ORACLE_TARGET = 1e-8
BRANCH_TOLERANCE = 1e-12
CLASSICAL_TOLERANCE = 1e-10

# Quadrature error slack the verdict margin is expected to absorb
TOLERANCE_LINT_FACTOR = 20.0


class Status(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, slots=True)
class Outcome:
    check: str
    status: Status
    detail: str = ""

    def as_row(self) -> list[str]:
        return [self.check, str(self.status), self.detail]


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), np.finfo(np.float64).tiny)


def _mixed(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1.0)


def _verdict(check: str, worst: float, limit: float, what: str) -> Outcome:
    status = Status.PASS if worst <= limit else Status.FAIL
    return Outcome(check, status, f"max {what} {worst:.3e} (limit {limit:.0e})")


# Kernel constants -----------------------------------------------------------


def _stable_constants(A: float, iv: Interval, branch: Branch) -> tuple[float, ...]:
    order = order_for_scale(A, iv)
    return (
        coef_midpoint(order, iv, branch=branch).value,
        coef_dragomir(order, iv, branch=branch).value,
        pachpatte_p1(A, branch=branch).value,
        pachpatte_p2(A, branch=branch).value,
    )


def branch_agreement(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """Series and direct branches agree across the switchover band."""
    worst = 0.0
    iv = Interval(0.0, 1.0)
    for A in np.geomspace(SERIES_THRESHOLD / 4.0, SERIES_THRESHOLD * 4.0, 9):
        A = float(A)
        series = _stable_constants(A, iv, Branch.SERIES)
        direct = _stable_constants(A, iv, Branch.DIRECT)
        worst = max(worst, *(_rel(s, d) for s, d in zip(series, direct, strict=True)))
    return _verdict("branch_agreement", worst, BRANCH_TOLERANCE, "relative gap")


def pachpatte_positive(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    bad = [
        float(A)
        for A in np.geomspace(1e-6, 1e3, 37)
        if not (pachpatte_p1(float(A)).value > 0.0 and pachpatte_p2(float(A)).value > 0.0)
    ]
    if bad:
        return Outcome("pachpatte_positive", Status.FAIL, f"nonpositive at A = {bad}")
    return Outcome("pachpatte_positive", Status.PASS, "P1, P2 > 0 on [1e-6, 1e3]")


def classical_constants(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    row = normalized_constants(FracOrder(1.0), Interval(0.0, 1.0))
    values = (
        row.midpoint_norm, row.dragomir_norm, row.p2_norm,
        row.p1_second_norm, row.p1_first_norm, row.p2_second_norm,
    )
    worst = max(abs(v - 1.0) for v in values)
    return _verdict("classical_constants", worst, 0.0, "deviation from 1")


def dragomir_factorization(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """coef_dragomir = (b − a)/(2(1 − e^{−A}))·(I1 + I2)."""
    iv = Interval(0.0, 1.0)
    worst = 0.0
    for A in (1e-3, 0.1, 1.0, 10.0, 100.0):
        order = order_for_scale(A, iv)
        scale = kernel_scale(order, iv)
        moments = dragomir_moments(scale)
        factored = iv.length / (2.0 * -math.expm1(-scale)) * (moments.i1 + moments.i2)
        worst = max(worst, _rel(factored, coef_dragomir(order, iv).value))
    return _verdict("dragomir_factorization", worst, BRANCH_TOLERANCE, "relative gap")


def branch_selection(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """Branch chosen below and above the switch, visible in the manifest."""
    iv = Interval(0.0, 1.0)
    low = normalized_constants(order_for_scale(SERIES_THRESHOLD / 10.0, iv), iv)
    high = normalized_constants(order_for_scale(SERIES_THRESHOLD * 10.0, iv), iv)
    weights = pachpatte_weights(low.A)
    ok = low.branch is Branch.SERIES and weights.branch is Branch.SERIES and high.branch is Branch.DIRECT
    detail = f"A={low.A:.3e} branch={low.branch}; A={high.A:.3e} branch={high.branch}"
    return Outcome("branch_selection", Status.PASS if ok else Status.FAIL, detail)


# Integrals ------------------------------------------------------------------


def monomial_closed_forms(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    worst = 0.0
    iv = Interval(-1.0, 2.0)
    for alpha in ORACLE_ALPHAS:
        order = FracOrder(alpha)
        for n in range(5):
            mono = _Monomial(n)
            exact_left = monomial_closed_form(n, order, iv.a, iv.b, Side.LEFT)
            exact_right = monomial_closed_form(n, order, iv.a, iv.b, Side.RIGHT)
            worst = max(
                worst,
                _mixed(left_integral(mono, order, iv.a, iv.b, quad).value, exact_left),
                _mixed(right_integral(mono, order, iv.a, iv.b, quad).value, exact_right),
            )
    return _verdict("monomial_closed_forms", worst, 1e-9, "relative error")


@dataclass(frozen=True)
class _Monomial:
    n: int

    def __call__(self, x: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(x, dtype=np.float64) ** self.n

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()


def oracle_agreement(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """Adaptive and brute-force integrals agree within target + est_error."""
    iv = Interval(0.0, 1.0)
    failures = 0
    cases = 0
    for entry in convex_corpus(cfg.seed, cfg.corpus_size, iv):
        for alpha in ORACLE_ALPHAS:
            order = FracOrder(alpha)
            for side in Side:
                if side is Side.LEFT:
                    adaptive = left_integral(entry.function, order, iv.a, iv.b, quad)
                else:
                    adaptive = right_integral(entry.function, order, iv.a, iv.b, quad)
                oracle = brute_frac(entry.function, order, iv, side, ORACLE_TARGET / 10.0)
                cases += 1
                if abs(oracle.value - adaptive.value) > ORACLE_TARGET + adaptive.est_error:
                    failures += 1
    status = Status.PASS if failures == 0 else Status.FAIL
    return Outcome("oracle_agreement", status, f"{failures} of {cases} cases disagree")


def _plain_integral(u: FunctionSpec, iv: Interval, quad: QuadratureConfig) -> float:
    def integrand(s: float) -> float:
        return float(u(s))

    return AdaptiveIntegrator(quad).integrate(integrand, iv.a, iv.b, u.breakpoints).value


def classical_reduction(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """At α = 1 the HH middle term is the plain integral mean."""
    iv = Interval(0.0, 1.0)
    worst = 0.0
    for entry in convex_corpus(cfg.seed, cfg.corpus_size, iv):
        report = check_hermite_hadamard(entry.function, FracOrder(1.0), iv, quad)
        plain = _plain_integral(entry.function, iv, quad)
        worst = max(worst, _mixed(report.term("mid"), plain / iv.length))
    return _verdict("classical_reduction", worst, CLASSICAL_TOLERANCE, "relative error")


# Inequalities ---------------------------------------------------------------


def _sweep_outcome(check: str, verdicts: Iterable[Verdict]) -> Outcome:
    counts: dict[Verdict, int] = {}
    for v in verdicts:
        counts[v] = counts.get(v, 0) + 1
    detail = " ".join(f"{v}={n}" for v, n in sorted(counts.items()))
    if counts.get(Verdict.VIOLATED) or counts.get(Verdict.SCREEN_FAILED):
        return Outcome(check, Status.FAIL, detail)
    if counts.get(Verdict.INCONCLUSIVE):
        return Outcome(check, Status.INCONCLUSIVE, detail)
    return Outcome(check, Status.PASS, detail)


def _inequality_sweep(
    check: str, inequality: InequalityName, cfg: RunConfig, quad: QuadratureConfig, **kwargs: object
) -> Outcome:
    tasks = build_tasks(
        [inequality], INTERVALS, DEFAULT_ALPHAS, seed=cfg.seed, size=cfg.corpus_size, **kwargs
    )
    result = run_sweep(tasks, quad)
    return _sweep_outcome(check, (row.verdict for row in result.rows))


def hh_sweep(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    return _inequality_sweep("hh_sweep", InequalityName.HH, cfg, quad)


def hh_concave_sweep(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    return _inequality_sweep("hh_concave_sweep", InequalityName.HH, cfg, quad, shape=Shape.CONCAVE)


def fejer_sweep(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    return _inequality_sweep("fejer_sweep", InequalityName.FEJER, cfg, quad)


def dragomir_sweep(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    return _inequality_sweep("dragomir_sweep", InequalityName.DA, cfg, quad)


def pachpatte_sweep(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    first = _inequality_sweep("pachpatte_sweep", InequalityName.PACHPATTE1, cfg, quad)
    second = _inequality_sweep("pachpatte_sweep", InequalityName.PACHPATTE2, cfg, quad)
    worst = max((first, second), key=lambda o: _SEVERITY[o.status])
    return Outcome("pachpatte_sweep", worst.status, f"first: {first.detail}; second: {second.detail}")


def fejer_unit_weight(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """With v ≡ 1 every Fejér term is the HH term times the kernel mass."""
    worst = 0.0
    for iv in INTERVALS:
        weight = WeightSpec.constant(iv)
        for entry in convex_corpus(cfg.seed, cfg.corpus_size, iv):
            for alpha in DEFAULT_ALPHAS:
                order = FracOrder(alpha)
                hh = check_hermite_hadamard(entry.function, order, iv, quad)
                fejer = check_fejer(entry.function, weight, order, iv, quad)
                mass = (
                    left_integral(weight, order, iv.a, iv.b, quad)
                    + right_integral(weight, order, iv.a, iv.b, quad)
                ).value
                for h, f in zip(hh.values, fejer.values, strict=True):
                    scale = max(abs(h * mass), abs(f), 1.0)
                    worst = max(worst, abs(f - h * mass) / scale)
    return _verdict("fejer_unit_weight", worst, CLASSICAL_TOLERANCE, "relative gap")


def dragomir_identity(cfg: RunConfig, quad: QuadratureConfig) -> Outcome:
    """Identity residual within ten verdict margins of the matching DA report."""
    worst = 0.0
    for iv in INTERVALS:
        for entry in convex_corpus(cfg.seed, cfg.corpus_size, iv, SMOOTH_FAMILIES):
            for alpha in DEFAULT_ALPHAS:
                order = FracOrder(alpha)
                residual = dragomir_identity_residual(entry.function, order, iv, quad)
                margin = check_dragomir_agarwal(entry.function, order, iv, quad).margin
                worst = max(worst, residual / margin)
    return _verdict("dragomir_identity", worst, 10.0, "residual in margins")


SelfCheck = Callable[[RunConfig, QuadratureConfig], Outcome]

SELFTESTS: tuple[SelfCheck, ...] = (
    branch_agreement,
    pachpatte_positive,
    classical_constants,
    dragomir_factorization,
    branch_selection,
    monomial_closed_forms,
    oracle_agreement,
    classical_reduction,
    hh_sweep,
    hh_concave_sweep,
    fejer_sweep,
    fejer_unit_weight,
    dragomir_sweep,
    dragomir_identity,
    pachpatte_sweep,
)

# Checks that only read closed forms; unaffected by quadrature tolerances
EXACT_CHECKS = frozenset(
    {"branch_agreement", "pachpatte_positive", "classical_constants",
     "dragomir_factorization", "branch_selection"}
)

_SEVERITY = {Status.PASS: 0, Status.INCONCLUSIVE: 1, Status.FAIL: 2}


def tolerance_lint(quad: QuadratureConfig) -> Outcome:
    """Configuration lint: flags abs_tol loose enough to swamp the verdict floor.

    Reads settings only, never an observed verdict; a flagged run reports
    inconclusive and downgrades quadrature-based failures.
    """
    floor = get_settings().verdict_floor
    allowance = TOLERANCE_LINT_FACTOR * quad.abs_tol
    if allowance > floor:
        return Outcome(
            "tolerance_lint", Status.INCONCLUSIVE,
            f"abs_tol {quad.abs_tol:.1e} is too loose for verdict floor {floor:.1e}",
        )
    return Outcome("tolerance_lint", Status.PASS, f"abs_tol {quad.abs_tol:.1e}")


def run_selftest(cfg: RunConfig, quad: QuadratureConfig | None = None) -> list[Outcome]:
    """Every invariant check, in a fixed order.

    Under a loose tolerance, failures of quadrature-based checks are reported
    as inconclusive rather than failed.
    """
    quad = quad or QuadratureConfig.from_settings()
    lint = tolerance_lint(quad)
    loose = lint.status is Status.INCONCLUSIVE
    outcomes = [lint]
    for check in SELFTESTS:
        name = check.__name__
        try:
            outcome = check(cfg, quad)
        except IntegrationError as e:
            outcome = Outcome(name, Status.INCONCLUSIVE, f"{type(e).__name__}: {e}")
        except ExpfracError as e:
            outcome = Outcome(name, Status.FAIL, f"{type(e).__name__}: {e}")
        if loose and outcome.status is Status.FAIL and name not in EXACT_CHECKS:
            outcome = Outcome(name, Status.INCONCLUSIVE, outcome.detail)
        logger.info("selftest_check", check=name, status=str(outcome.status))
        outcomes.append(outcome)
    return outcomes


def selftest_exit_code(outcomes: Iterable[Outcome]) -> int:
    statuses = {o.status for o in outcomes}
    if Status.FAIL in statuses:
        return 2
    if Status.INCONCLUSIVE in statuses:
        return 3
    return 0
