"""Geometric property checks of one polar step.

Every check returns a ``CheckResult``. Rational-mode checks compare exactly
(tolerance zero); double-mode checks compare against a relative tolerance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from polarint.algebra import linalg
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.analysis.stepping import Target, form_of
from polarint.errors import ArityError, ScalarModeError, SingularStepError
from polarint.hamiltonian.integrals import product_integral
from polarint.hamiltonian.measure import closed_form_jacobian, density_ratio, measure_density
from polarint.hamiltonian.spec import HamiltonianSpec
from polarint.integrators.polarmap import polar_step
from polarint.integrators.window import PolarWindow

logger = logging.getLogger(__name__)

DOUBLE_TOLERANCE = 1e-12
FD_TOLERANCE = 1e-5
FD_STEP = 1e-6


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EXPECTED_FAIL = "expected-fail"
    SKIPPED = "skipped"


@dataclass
class CheckResult:
    name: str
    status: Status
    max_residual: Scalar | None
    tolerance: Scalar | None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status in (Status.PASS, Status.EXPECTED_FAIL, Status.SKIPPED)


def default_tolerance(mode: ScalarMode, double: float = DOUBLE_TOLERANCE) -> Scalar:
    return mode.zero() if mode.exact else double


def _max_abs(values) -> Scalar:
    return max((abs(v) for v in np.ravel(values)), default=0)


def relative_gap(a, b, mode: ScalarMode) -> Scalar:
    """max|a - b| / max(1, max|b|), exact in rational mode; non-finite gaps are infinite."""
    gap = _max_abs(np.asarray(a, dtype=mode.dtype) - np.asarray(b, dtype=mode.dtype))
    if mode.exact:
        return gap / max(mode.one(), _max_abs(b))
    gap = float(gap)
    if not np.isfinite(gap):
        return float("inf")
    return gap / max(1.0, float(_max_abs(b)))


def merge(name: str, results: Sequence[CheckResult]) -> CheckResult:
    """Fold several results of one check into the worst one."""
    if not results:
        return CheckResult(name, Status.SKIPPED, None, None, {"reason": "no windows checked"})
    worst = max(results, key=lambda r: (r.status == Status.FAIL, r.max_residual or 0))
    status = Status.FAIL if any(r.status == Status.FAIL for r in results) else worst.status
    details = dict(worst.details)
    details["cases"] = len(results)
    return CheckResult(name, status, worst.max_residual, worst.tolerance, details)


def _verdict(name: str, residual: Scalar, tolerance: Scalar, **details) -> CheckResult:
    status = Status.PASS if residual <= tolerance else Status.FAIL
    if status == Status.FAIL:
        logger.info("check %s failed: residual %s > %s", name, residual, tolerance)
    return CheckResult(name, status, residual, tolerance, details)


def _forward(F, window: PolarWindow) -> np.ndarray:
    res = polar_step(F, window)
    if res.singular:
        raise SingularStepError("Polar step is singular at this window.", step_index=window.step_index + 1)
    return res.new_point


def check_self_adjoint(target: Target, window: PolarWindow, tolerance: Scalar | None = None) -> CheckResult:
    """Step forward with h, then from the reversed window (x_k, ..., x_1) with -h; expect x_0 back."""
    F = form_of(target, window.k)
    x_k = _forward(F, window)
    reverse = PolarWindow((x_k,) + window.points[:0:-1], -window.h, window.mode, window.step_index)
    back = _forward(F, reverse)
    tol = default_tolerance(window.mode) if tolerance is None else tolerance
    return _verdict("self-adjoint", relative_gap(back, window.points[0], window.mode), tol, step_index=window.step_index)


def window_map_jacobian_fd(target: Target, window: PolarWindow, fd_step: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian of (x_0, ..., x_{k-1}) -> (x_1, ..., x_k) on V^k (double mode)."""
    if window.mode.exact:
        raise ScalarModeError("Finite-difference Jacobians run in double mode; use the closed form in rational mode.")
    F = form_of(target, window.k)
    X = np.concatenate(window.points)
    n, k = window.dimension, window.k

    def image(Y: np.ndarray) -> np.ndarray:
        pts = [Y[i * n : (i + 1) * n] for i in range(k)]
        x_k = _forward(F, PolarWindow(tuple(pts), window.h, window.mode, window.step_index))
        return np.concatenate(pts[1:] + [x_k])

    jac = np.empty((n * k, n * k))
    for col in range(n * k):
        dX = np.zeros(n * k)
        dX[col] = fd_step
        jac[:, col] = (image(X + dX) - image(X - dX)) / (2 * fd_step)
    return jac


def check_measure_jacobian(
    spec: HamiltonianSpec,
    window: PolarWindow,
    fd_step: float = FD_STEP,
    tolerance: Scalar | None = None,
) -> CheckResult:
    """Jacobian determinant of one step against the ratio of measure densities.

    (a) finite-difference determinant of the window map (double mode only),
    (b) det of the closed form (I - cKS_0)^-1 (I + cKS_1),
    (c) det(I - cKS_1) / det(I - cKS_0).
    (b) = (c) is an identity; (a) agrees with them up to ``fd_step``.
    """
    mode = window.mode
    F = spec.form(window.k)
    x_k = _forward(F, window)
    extended = list(window.points) + [x_k]
    if measure_density(spec, window).singular:
        raise SingularStepError("Measure density undefined at this window.", step_index=window.step_index)
    closed = linalg.det(closed_form_jacobian(spec, extended, window.h), mode)
    ratio = density_ratio(spec, extended, window.h)
    residual = relative_gap([closed], [ratio], mode)
    details = {"closed_form": mode.format(closed), "density_ratio": mode.format(ratio), "step_index": window.step_index}
    tol = default_tolerance(mode, 1e-10) if tolerance is None else tolerance
    if not mode.exact:
        fd = float(np.linalg.det(window_map_jacobian_fd(spec, window, fd_step)))
        # block-cyclic column shift between the window map and dx_k/dx_0
        fd *= (-1) ** (window.dimension * (window.k - 1))
        fd_gap = relative_gap([fd], [ratio], mode)
        details["finite_difference"] = fd
        details["finite_difference_gap"] = fd_gap
        if fd_gap > FD_TOLERANCE:
            return CheckResult("measure-jacobian", Status.FAIL, max(residual, fd_gap), FD_TOLERANCE, details)
    return _verdict("measure-jacobian", residual, tol, **details)


def _unit_product(lam: Sequence[Scalar], mode: ScalarMode) -> None:
    prod = mode.one()
    for v in lam:
        prod = prod * v
    ok = prod == 1 if mode.exact else abs(prod - 1) <= 1e-12
    if not ok:
        raise ValueError(f"Scaling factors must multiply to 1, got product {prod}.")


def check_scaling(
    target: Target,
    window: PolarWindow,
    lam: Sequence,
    tolerance: Scalar | None = None,
) -> CheckResult:
    """phi(l_0 x_0, ..., l_{k-1} x_{k-1}) = l_0 phi(x_0, ..., x_{k-1}) when prod l = 1.

    For a Hamiltonian target the measure density and the product integral
    must also be unchanged.
    """
    mode = window.mode
    if len(lam) != window.k:
        raise ArityError(f"Need {window.k} scaling factors, got {len(lam)}.")
    lam = [mode.as_scalar(v) for v in lam]
    _unit_product(lam, mode)
    F = form_of(target, window.k)
    x_k = _forward(F, window)
    scaled = window.scaled(lam)
    y_k = _forward(F, scaled)
    residuals = {"equivariance": relative_gap(y_k, lam[0] * x_k, mode)}
    if isinstance(target, HamiltonianSpec):
        before = measure_density(target, window)
        after = measure_density(target, scaled)
        residuals["density"] = relative_gap([after.determinant], [before.determinant], mode)
        if target.Omega is not None:
            p0 = product_integral(target, list(window.points) + [x_k])
            p1 = product_integral(target, list(scaled.points) + [y_k])
            residuals["product_integral"] = relative_gap([p1], [p0], mode)
    worst = max(residuals.values())
    tol = default_tolerance(mode) if tolerance is None else tolerance
    return _verdict(
        "scaling",
        worst,
        tol,
        factors=[mode.format(v) for v in lam],
        **{f"{key}_residual": mode.format(v) for key, v in residuals.items()},
    )
