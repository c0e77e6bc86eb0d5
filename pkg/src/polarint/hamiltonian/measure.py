"""Invariant measure of the Hamiltonian polar map.

The map preserves mu^k / det(I - c K S(x_0, ..., x_{k-1})) on V^k, where
c = h/(k-1)! and S is the tensor of H with all but two slots fixed, divided
by k+1. Under this normalization c K S equals k h F(x_0, ..., x_{k-1}, .) for
the polarized field F, and at k = 1 the density is 1/det(I - h f'(x)/2).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from polarint.algebra import linalg
from polarint.algebra.polarize import contract_to_bilinear
from polarint.algebra.scalar import Scalar
from polarint.errors import ArityError, SingularStepError
from polarint.hamiltonian.spec import HamiltonianSpec
from polarint.integrators.window import PolarWindow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasureDensity:
    """1/det(I - c K S) at one window; ``density`` is None where the determinant vanishes."""

    c_measure: Scalar
    determinant: Scalar
    density: Scalar | None

    @property
    def singular(self) -> bool:
        return self.density is None


def measure_constant(h: Scalar, k: int) -> Scalar:
    return h / math.factorial(k - 1)


def measure_matrix(spec: HamiltonianSpec, points: Sequence, h: Scalar) -> np.ndarray:
    """c K S(x_0, ..., x_{k-1}) for the k points given."""
    k = spec.resolve_k(len(points))
    h = spec.mode.as_scalar(h)
    S = contract_to_bilinear(spec.tensor(k), list(points)) / (k + 1)
    return measure_constant(h, k) * (spec.K @ S)


def _density_determinant(spec: HamiltonianSpec, points: Sequence, h: Scalar) -> Scalar:
    n = spec.dimension
    return linalg.det(spec.mode.eye(n) - measure_matrix(spec, points, h), spec.mode)


def measure_density(spec: HamiltonianSpec, window: PolarWindow) -> MeasureDensity:
    k = spec.resolve_k(window.k)
    det = _density_determinant(spec, window.points, window.h)
    density = None if det == 0 else spec.mode.one() / det
    if density is None:
        logger.warning("measure density undefined at window ending at index %d", window.step_index)
    return MeasureDensity(measure_constant(window.h, k), det, density)


def closed_form_jacobian(spec: HamiltonianSpec, points: Sequence, h: Scalar) -> np.ndarray:
    """dx_k/dx_0 = (I - c K S_0)^-1 (I + c K S_1) along the extended window x_0, ..., x_k.

    S_0 is taken at (x_0, ..., x_{k-1}) and S_1 at (x_1, ..., x_k).
    """
    if len(points) < 2:
        raise ArityError(f"Need the k+1 points x_0, ..., x_k; got {len(points)}.")
    eye = spec.mode.eye(spec.dimension)
    lhs = eye - measure_matrix(spec, points[:-1], h)
    rhs = eye + measure_matrix(spec, points[1:], h)
    try:
        jac, _ = linalg.solve(lhs, rhs, spec.mode)
    except SingularStepError as exc:
        raise SingularStepError(f"Jacobian undefined: {exc}", condition=exc.condition) from None
    return jac


def density_ratio(spec: HamiltonianSpec, points: Sequence, h: Scalar) -> Scalar:
    """det(I - c K S_1) / det(I - c K S_0), the Jacobian determinant the measure predicts."""
    before = _density_determinant(spec, points[:-1], h)
    if before == 0:
        raise SingularStepError("Measure density undefined at the starting window.")
    return _density_determinant(spec, points[1:], h) / before
