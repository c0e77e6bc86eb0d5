"""Starting windows for k-step maps and the reference flow used to build them."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Sequence

import numpy as np

from polarint.algebra.polyfield import PolyVectorField, evaluate_field
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import BootstrapError, ConfigError
from polarint.integrators.window import BootstrapConfig, BootstrapMethod, PolarWindow

logger = logging.getLogger(__name__)


def _double_field(f: PolyVectorField) -> PolyVectorField:
    if not f.mode.exact:
        return f
    components = [[(float(m.coeff), m.exponents) for m in comp] for comp in f.components]
    return PolyVectorField.from_terms(f.dimension, components, ScalarMode.DOUBLE)


def reference_flow(f: PolyVectorField, x, t: float, substeps: int = 100) -> np.ndarray:
    """Classical fourth-order Runge-Kutta flow of ``f`` over time ``t``, always in doubles."""
    f = _double_field(f)
    y = np.array([float(v) for v in x], dtype=float)
    dt = float(t) / substeps
    rhs = lambda z: evaluate_field(f, z)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(substeps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
            y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise BootstrapError(f"Reference flow overflowed before t={t}; reduce h or the initial point.")
    return y


def bootstrap(
    f: PolyVectorField,
    x_init,
    config: BootstrapConfig,
    *,
    h: Scalar,
    k: int,
    provided: Sequence | None = None,
) -> PolarWindow:
    """Build the window (x_0, ..., x_{k-1}) for a k-step map.

    ``reference-one-step`` starts at ``x_init`` and fills the remaining points
    with the reference flow (``config.substeps`` substeps per interval h);
    ``exact-provided`` takes ``provided`` verbatim. In rational mode the
    reference points are the exact values of their doubles, so the window is
    only as close to the flow as the double computation.
    """
    mode = f.mode
    if config.method is BootstrapMethod.EXACT_PROVIDED:
        if provided is None or len(provided) != k:
            got = 0 if provided is None else len(provided)
            raise ConfigError(f"exact-provided bootstrap needs {k} window points, got {got}.")
        return PolarWindow.build(provided, h, mode)
    points = [mode.vector(x_init)]
    for i in range(1, k):
        y = reference_flow(f, points[-1], h, config.substeps)
        points.append(mode.vector([Fraction(v) for v in y]) if mode.exact else y)
        logger.debug("bootstrap point %d: %s", i, y)
    if mode.exact and k > 1:
        logger.warning(
            "rational window built from the double reference flow; its %d bootstrapped point(s) "
            "carry double rounding error",
            k - 1,
        )
    return PolarWindow.build(points, h, mode)
