"""Kahan's map and the k-step polar map.

For a homogeneous field of degree k+1 with polarization F, the polar map
sends (x_0, ..., x_{k-1}) to (x_1, ..., x_k) where

    (x_k - x_0) / (k h) = F(x_0, ..., x_k).

The right-hand side is linear in x_k, so x_k = (I - k h M)^{-1} x_0 with
M = F(x_0, ..., x_{k-1}, .). The map is never regularized: a singular
system is reported to the caller.
"""

from __future__ import annotations

import logging
from typing import Callable, Union

import numpy as np

from polarint.algebra import linalg
from polarint.algebra.polarize import SymMultilinearForm, contract_to_matrix, polarize
from polarint.algebra.polyfield import PolyVectorField, degree_split, homogenize
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ArityError, DegreeError, ScalarModeError, SingularStepError
from polarint.integrators.window import PolarWindow, StepResult, Trajectory

logger = logging.getLogger(__name__)

FieldOrForm = Union[PolyVectorField, SymMultilinearForm]


def polar_form(f: FieldOrForm, k: int) -> SymMultilinearForm:
    """Polarization of a homogeneous field driving a k-step map."""
    if isinstance(f, SymMultilinearForm):
        if f.order != k + 1:
            raise ArityError(f"Form of order {f.order} drives a {f.order - 1}-step map, not {k}.")
        return f
    return polarize(f, degree=k + 1)


def _max_abs(v: np.ndarray) -> Scalar:
    return max((abs(x) for x in v), default=0)


def _check_mode(expected: ScalarMode, window: PolarWindow) -> None:
    if window.mode is not expected:
        raise ScalarModeError(f"Window is in {window.mode.value} mode, the map in {expected.value} mode.")


def _linear_part(f1: PolyVectorField) -> np.ndarray:
    B = f1.mode.zeros((f1.dimension, f1.dimension))
    for i, comp in enumerate(f1.components):
        for m in comp:
            B[i, m.exponents.index(1)] += m.coeff
    return B


def _constant_part(f0: PolyVectorField) -> np.ndarray:
    c = f0.mode.zeros(f0.dimension)
    for i, comp in enumerate(f0.components):
        for m in comp:
            c[i] += m.coeff
    return c


def kahan_step(f: PolyVectorField, x, h: Scalar) -> np.ndarray:
    """One step of (x' - x)/h = Q(x, x') + B(x + x')/2 + c."""
    if (f.degree or 0) > 2:
        raise DegreeError(f"Kahan's map needs a field of degree <= 2, got degree {f.degree}.")
    mode = f.mode
    h = mode.as_scalar(h)
    x = mode.vector(x)
    if x.shape != (f.dimension,):
        raise ArityError(f"Point has length {x.shape[0]}, expected {f.dimension}.")
    n = f.dimension
    parts = degree_split(f)
    Qx = contract_to_matrix(polarize(parts[2]), [x]) if 2 in parts else mode.zeros((n, n))
    B = _linear_part(parts[1]) if 1 in parts else mode.zeros((n, n))
    c = _constant_part(parts[0]) if 0 in parts else mode.zeros(n)
    half_h = h / 2
    a = mode.eye(n) - h * Qx - half_h * B
    rhs = x + half_h * (B @ x) + h * c
    x_new, cond = linalg.solve(a, rhs, mode)
    logger.debug("kahan step: cond=%s", cond)
    return x_new


def _step_matrix(F: SymMultilinearForm, points, kh: Scalar) -> np.ndarray:
    return F.mode.eye(F.dimension) - kh * contract_to_matrix(F, list(points))


def polar_step(F: SymMultilinearForm, window: PolarWindow) -> StepResult:
    """Solve the polar-map linear system for x_k."""
    if F.order != window.k + 1:
        raise ArityError(f"Form of order {F.order} needs a window of {F.order - 1} points, got {window.k}.")
    _check_mode(F.mode, window)
    kh = window.k * window.h
    a = _step_matrix(F, window.points, kh)
    x0 = window.points[0]
    try:
        x_k, cond = linalg.solve(a, x0, F.mode)
    except SingularStepError as exc:
        logger.warning("singular polar step at index %d: %s", window.step_index + 1, exc)
        return StepResult(None, exc.condition, True)
    residual = _max_abs(a @ x_k - x0)
    return StepResult(x_k, cond, False, residual)


def inverse_polar_step(F: SymMultilinearForm, window: PolarWindow) -> np.ndarray:
    """Recover x_0 from the window (x_1, ..., x_k): x_k = (I + k h M') x_0."""
    if F.order != window.k + 1:
        raise ArityError(f"Form of order {F.order} needs a window of {F.order - 1} points, got {window.k}.")
    _check_mode(F.mode, window)
    a = _step_matrix(F, window.points, -window.k * window.h)
    try:
        x0, _ = linalg.solve(a, window.points[-1], F.mode)
    except SingularStepError as exc:
        exc.step_index = window.step_index - window.k
        raise
    return x0


def _suspension(f: PolyVectorField, k: int) -> SymMultilinearForm:
    d = k + 1
    if (f.degree or 0) > d:
        raise DegreeError(
            f"A {k}-step window suspends fields up to degree {d}; this field has degree {f.degree}."
        )
    return polarize(homogenize(f, d), degree=d)


def _lift(window: PolarWindow) -> PolarWindow:
    one = window.mode.one()
    return PolarWindow(
        tuple(np.append(p, one) for p in window.points),
        window.h,
        window.mode,
        window.step_index,
    )


def _suspended_from_form(F: SymMultilinearForm, window: PolarWindow, extension: bool) -> StepResult:
    res = polar_step(F, _lift(window))
    if res.singular:
        return StepResult(None, res.solve_condition, True, extension=extension)
    w = res.new_point[-1]
    if w == 0 or (not window.mode.exact and abs(w) < np.finfo(float).tiny):
        logger.warning("suspended step projected through w = 0")
        return StepResult(None, res.solve_condition, True, extension=extension)
    return StepResult(res.new_point[:-1] / w, res.solve_condition, False, res.residual, extension)


def suspended_step(f: PolyVectorField, window: PolarWindow) -> StepResult:
    """Polar step of the homogenized field, projected back to R^n.

    For quadratics this equals Kahan's map; above degree two the result is
    marked as an extension.
    """
    _check_mode(f.mode, window)
    F = _suspension(f, window.k)
    return _suspended_from_form(F, window, _is_extension(f, window.k))


def _needs_suspension(f: PolyVectorField) -> bool:
    return not f.is_homogeneous or (f.degree is not None and f.degree < 2)


def _is_extension(f: PolyVectorField, k: int) -> bool:
    return k + 1 > 2 and not f.is_homogeneous


def _advance(
    advance: Callable[[PolarWindow], StepResult], window: PolarWindow, steps: int, extension: bool
) -> Trajectory:
    traj = Trajectory(
        list(window.points),
        window.h,
        window.mode,
        start_index=window.step_index - window.k + 1,
        extension=extension,
    )
    for _ in range(steps):
        res = advance(window)
        if res.singular:
            traj.singular = True
            traj.singular_at = window.step_index + 1
            logger.warning("integration stopped: singular step at index %d", traj.singular_at)
            break
        logger.debug("step %d: residual=%s cond=%s", window.step_index + 1, res.residual, res.solve_condition)
        traj.points.append(res.new_point)
        window = window.shifted(res.new_point)
    logger.info("integrated %d points (singular=%s)", len(traj), traj.singular)
    return traj


def integrate(f: FieldOrForm, window: PolarWindow, steps: int) -> Trajectory:
    """Iterate the polar map ``steps`` times, stopping early on a singular step.

    Nonhomogeneous and linear fields are integrated through their suspension.
    """
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}.")
    if isinstance(f, PolyVectorField) and _needs_suspension(f):
        F = _suspension(f, window.k)
        extension = _is_extension(f, window.k)
        return _advance(lambda w: _suspended_from_form(F, w, extension), window, steps, extension)
    F = polar_form(f, window.k)
    return _advance(lambda w: polar_step(F, w), window, steps, False)
