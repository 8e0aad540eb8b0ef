"""Numerical services: kernel constants, fractional integrals and inequality checks."""

from .fractional import (
    FracIntegralValue,
    endpoint_sum,
    left_integral,
    monomial_closed_form,
    right_integral,
    unit_interval_form,
)
from .inequalities import (
    check_dragomir_agarwal,
    check_fejer,
    check_hermite_hadamard,
    check_pachpatte_first,
    check_pachpatte_second,
    dragomir_identity_residual,
    run_check,
    weight_masses,
)
from .integrators import QuadratureConfig
from .limits import (
    ConstantRow,
    LimitRow,
    LimitSweep,
    classical_limit_sweep,
    constants_table,
    identity_limit,
    normalized_constants,
    order_for_scale,
)
from .sweep import SweepResult, SweepRow, SweepTask, build_tasks, run_sweep, sweep_exit_code

__all__ = [
    "ConstantRow",
    "FracIntegralValue",
    "LimitRow",
    "LimitSweep",
    "QuadratureConfig",
    "SweepResult",
    "SweepRow",
    "SweepTask",
    "build_tasks",
    "check_dragomir_agarwal",
    "check_fejer",
    "check_hermite_hadamard",
    "check_pachpatte_first",
    "check_pachpatte_second",
    "classical_limit_sweep",
    "constants_table",
    "dragomir_identity_residual",
    "endpoint_sum",
    "identity_limit",
    "left_integral",
    "monomial_closed_form",
    "normalized_constants",
    "order_for_scale",
    "right_integral",
    "run_check",
    "run_sweep",
    "sweep_exit_code",
    "unit_interval_form",
    "weight_masses",
]
