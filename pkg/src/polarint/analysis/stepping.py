"""Resolve the things a check can be pointed at into a one-step function."""

from __future__ import annotations

from typing import Callable, Union

from polarint.algebra.polarize import SymMultilinearForm
from polarint.algebra.polyfield import PolyVectorField
from polarint.errors import SingularStepError
from polarint.hamiltonian.spec import HamiltonianSpec
from polarint.integrators.polarmap import kahan_step, polar_form, polar_step, suspended_step
from polarint.integrators.window import PolarWindow, StepResult, Trajectory

Target = Union[SymMultilinearForm, PolyVectorField, HamiltonianSpec]
Stepper = Callable[[PolarWindow], StepResult]


def form_of(target: Target, k: int) -> SymMultilinearForm:
    if isinstance(target, HamiltonianSpec):
        return target.form(k)
    return polar_form(target, k)


def _kahan(f: PolyVectorField) -> Stepper:
    def step(window: PolarWindow) -> StepResult:
        try:
            x = kahan_step(f, window.points[0], window.h)
        except SingularStepError as exc:
            return StepResult(None, exc.condition, True)
        return StepResult(x, None, False)

    return step


def stepper(target: Target, k: int) -> Stepper:
    """One-step map for a k-point window.

    Quadratic (or lower) fields with k = 1 step with Kahan's map, other
    nonhomogeneous fields through their suspension.
    """
    if isinstance(target, PolyVectorField):
        if k == 1 and (target.degree or 0) <= 2 and not (target.degree == 2 and target.is_homogeneous):
            return _kahan(target)
        if not target.is_homogeneous:
            return lambda w: suspended_step(target, w)
    F = form_of(target, k)
    return lambda w: polar_step(F, w)


def window_at(trajectory: Trajectory, j: int, k: int) -> PolarWindow:
    """The k-point window starting at position ``j`` of the trajectory."""
    points = trajectory.points[j : j + k]
    return PolarWindow.build(points, trajectory.h, trajectory.mode, trajectory.start_index + j + k - 1)
