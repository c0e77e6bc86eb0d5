"""Two-step leapfrog, (x_2 - x_0)/(2h) = f(x_1).

Birational like the polar map but not multilinear; it serves as the control
that should not conserve the polar map's k-integrals.
"""

from __future__ import annotations

import numpy as np

from polarint.algebra.polyfield import PolyVectorField, evaluate_field
from polarint.errors import ArityError
from polarint.integrators.window import PolarWindow, Trajectory


def leapfrog_step(f: PolyVectorField, window: PolarWindow) -> np.ndarray:
    if window.k != 2:
        raise ArityError(f"Leapfrog is a two-step map; got a window of {window.k} points.")
    x0, x1 = window.points
    return x0 + 2 * window.h * evaluate_field(f, x1)


def integrate_leapfrog(f: PolyVectorField, window: PolarWindow, steps: int) -> Trajectory:
    traj = Trajectory(list(window.points), window.h, window.mode, start_index=window.step_index - 1)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            x2 = leapfrog_step(f, window)
            traj.points.append(x2)
            window = window.shifted(x2)
    return traj
