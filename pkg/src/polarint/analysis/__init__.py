from polarint.analysis.checks import (
    CheckResult,
    Status,
    check_measure_jacobian,
    check_scaling,
    check_self_adjoint,
    window_map_jacobian_fd,
)
from polarint.analysis.drift import DriftReport, drift_series, k_integral_drift
from polarint.analysis.entropy import EntropyEstimate, Growth, height, height_growth
from polarint.analysis.oracles import (
    ExplicitQuarticMap,
    ScalarOracleState,
    explicit_quartic_step,
    scalar_oracle_step,
    scalar_oracle_trajectory,
)
from polarint.analysis.suite import run_checks

__all__ = [
    "CheckResult",
    "DriftReport",
    "EntropyEstimate",
    "ExplicitQuarticMap",
    "Growth",
    "ScalarOracleState",
    "Status",
    "check_measure_jacobian",
    "check_scaling",
    "check_self_adjoint",
    "drift_series",
    "explicit_quartic_step",
    "height",
    "height_growth",
    "k_integral_drift",
    "run_checks",
    "scalar_oracle_step",
    "scalar_oracle_trajectory",
    "window_map_jacobian_fd",
]
