"""Drift of quantities sampled along a trajectory."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from polarint.algebra.scalar import Scalar
from polarint.errors import ArityError
from polarint.hamiltonian.integrals import omega
from polarint.hamiltonian.spec import HamiltonianSpec
from polarint.integrators.window import Trajectory

logger = logging.getLogger(__name__)

Evaluator = Callable[[Trajectory, int], Scalar]

# k-integral drift of a double-mode run.
DOUBLE_DRIFT_TOLERANCE = 1e-11


@dataclass(frozen=True)
class DriftReport:
    """Samples of one invariant and their spread around the first sample.

    ``max_rel_drift`` divides by |first sample| (by 1 when it is zero);
    non-finite samples count as infinite drift.
    """

    name: str
    series: tuple[Scalar, ...]
    max_abs_drift: Scalar
    max_rel_drift: Scalar
    tolerance: Scalar

    @property
    def passed(self) -> bool:
        return self.max_rel_drift <= self.tolerance


def _spread(series: list[Scalar], exact: bool) -> tuple[Scalar, Scalar]:
    first = series[0]
    if exact:
        drift = max(abs(v - first) for v in series)
        return drift, drift / abs(first) if first else drift
    values = np.asarray(series, dtype=float)
    if not np.all(np.isfinite(values)):
        return math.inf, math.inf
    drift = float(np.max(np.abs(values - values[0])))
    scale = abs(float(values[0])) or 1.0
    return drift, drift / scale


def drift_series(
    trajectory: Trajectory,
    evaluate: Evaluator,
    stride: int,
    *,
    span: int = 1,
    offset: int = 0,
    name: str = "invariant",
    tolerance: Scalar | None = None,
) -> DriftReport:
    """Evaluate ``evaluate(trajectory, j)`` at j = offset, offset + stride, ...

    ``span`` is the number of points the evaluator reads from position j on.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}.")
    positions = range(offset, len(trajectory) - span + 1, stride)
    if len(positions) < 2:
        raise ArityError(
            f"Trajectory of {len(trajectory)} points gives {len(positions)} sample(s) of '{name}' "
            f"at stride {stride}; need at least 2."
        )
    with np.errstate(over="ignore", invalid="ignore"):
        series = [evaluate(trajectory, j) for j in positions]
    exact = trajectory.mode.exact
    abs_drift, rel_drift = _spread(series, exact)
    if tolerance is None:
        tolerance = trajectory.mode.zero() if exact else DOUBLE_DRIFT_TOLERANCE
    logger.debug("drift of %s: abs=%s rel=%s over %d samples", name, abs_drift, rel_drift, len(series))
    return DriftReport(name, tuple(series), abs_drift, rel_drift, tolerance)


def k_integral_drift(
    spec: HamiltonianSpec,
    trajectory: Trajectory,
    k: int | None = None,
    tolerance: Scalar | None = None,
) -> list[DriftReport]:
    """One report per offset j < k of omega(x_j, x_{j+1}) sampled every k steps."""
    k = spec.resolve_k(k)
    evaluate = lambda traj, j: omega(spec, traj.points[j], traj.points[j + 1])
    return [
        drift_series(trajectory, evaluate, k, span=2, offset=j, name=f"omega[{j}]", tolerance=tolerance)
        for j in range(k)
    ]
