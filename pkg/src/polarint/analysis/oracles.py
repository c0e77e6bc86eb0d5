"""Closed-form maps the general polar machinery is checked against."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import Sequence

import numpy as np

from polarint.algebra.polyfield import ScalarPoly
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ArityError, SingularStepError
from polarint.hamiltonian.spec import HamiltonianSpec, symplectic_structure

logger = logging.getLogger(__name__)


def _product(values: Sequence[Scalar], mode: ScalarMode) -> Scalar:
    return reduce(mul, values, mode.one())


@dataclass(frozen=True)
class ScalarOracleState:
    """Window of x' = x^(k+1) with its invariant I = 1/(x_n ... x_{n+k-1})."""

    k: int
    h: Scalar
    points: tuple[Scalar, ...]
    I: Scalar
    mode: ScalarMode = ScalarMode.RATIONAL

    @classmethod
    def start(cls, points: Sequence, h: Scalar, mode: ScalarMode = ScalarMode.RATIONAL) -> ScalarOracleState:
        xs = tuple(mode.as_scalar(x) for x in points)
        if not xs:
            raise ArityError("The scalar recurrence needs at least one point.")
        prod = _product(xs, mode)
        if prod == 0:
            raise SingularStepError("Invariant 1/(x_0 ... x_{k-1}) is undefined at a zero point.")
        return cls(len(xs), mode.as_scalar(h), xs, mode.one() / prod, mode)


def _advance(state: ScalarOracleState) -> ScalarOracleState:
    nxt = state.I - state.h * state.k
    rest = _product(state.points[1:], state.mode)
    if nxt == 0 or rest == 0:
        raise SingularStepError(
            f"Discrete flow of x' = x^{state.k + 1} blows up: I reaches {nxt}.",
        )
    x_new = state.mode.one() / (rest * nxt)
    return ScalarOracleState(state.k, state.h, state.points[1:] + (x_new,), nxt, state.mode)


def scalar_oracle_step(state: ScalarOracleState) -> Scalar:
    """x_{n+k} from I_{n+1} = I_n - h k."""
    return _advance(state).points[-1]


def scalar_oracle_trajectory(state: ScalarOracleState, steps: int) -> tuple[list[Scalar], list[Scalar]]:
    """Points x_0, x_1, ... and the invariant I_0, I_1, ... over ``steps`` steps."""
    points = list(state.points)
    invariants = [state.I]
    for _ in range(steps):
        state = _advance(state)
        points.append(state.points[-1])
        invariants.append(state.I)
    return points, invariants


@dataclass(frozen=True)
class ExplicitQuarticMap:
    """Closed-form polar map of H = a q^4 + 4b q^3 p + 6c q^2 p^2 + 4d q p^3 + e p^4, K = [[0, 1], [-1, 0]].

    The map with step h is the general polar map of the same H with step h/4.
    """

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar
    e: Scalar
    h: Scalar
    mode: ScalarMode = ScalarMode.RATIONAL

    @classmethod
    def build(cls, coefficients: Sequence, h: Scalar, mode: ScalarMode = ScalarMode.RATIONAL) -> ExplicitQuarticMap:
        if len(coefficients) != 5:
            raise ArityError(f"Need the five coefficients a, b, c, d, e; got {len(coefficients)}.")
        a, b, c, d, e = (mode.as_scalar(v) for v in coefficients)
        return cls(a, b, c, d, e, mode.as_scalar(h), mode)

    @property
    def general_step(self) -> Scalar:
        """Step size of the equivalent general polar map."""
        return self.h / 4

    def hamiltonian(self) -> HamiltonianSpec:
        m = self.mode
        terms = [
            (self.a, (4, 0)),
            (4 * self.b, (3, 1)),
            (6 * self.c, (2, 2)),
            (4 * self.d, (1, 3)),
            (self.e, (0, 4)),
        ]
        return HamiltonianSpec.build(ScalarPoly.from_terms(2, terms, m), symplectic_structure(2, m), degree=4)

    def delta(self, window: Sequence) -> Scalar:
        """Sum of the six 2x2-minor terms of the map's denominator."""
        (q0, p0), (q1, p1) = self._window(window)
        a, b, c, d, e = self.a, self.b, self.c, self.d, self.e
        return (
            (c * e - d * d) * p0**2 * p1**2
            + (b * e - c * d) * (p0**2 * p1 * q1 + p0 * p1**2 * q0)
            + (b * d - c * c) * (p0**2 * q1**2 + p1**2 * q0**2)
            + (a * d - b * c) * (p1 * q0**2 * q1 + p0 * q0 * q1**2)
            + (a * e - c * c) * p0 * p1 * q0 * q1
            + (a * c - b * b) * q0**2 * q1**2
        )

    def denominator(self, window: Sequence) -> Scalar:
        """det(I - (h/2) M) of the linear solve, equal to 1 + 4 h^2 delta."""
        return self.mode.one() + 4 * self.h**2 * self.delta(window)

    def density(self, window: Sequence) -> Scalar:
        den = self.denominator(window)
        if den == 0:
            raise SingularStepError("Invariant density undefined: vanishing denominator.")
        return self.mode.one() / den

    def _window(self, window: Sequence) -> tuple[np.ndarray, np.ndarray]:
        points = getattr(window, "points", window)
        if len(points) != 2:
            raise ArityError(f"The explicit map acts on two points, got {len(points)}.")
        x0, x1 = (self.mode.vector(p) for p in points)
        if x0.shape != (2,) or x1.shape != (2,):
            raise ArityError("The explicit map acts on points of the plane.")
        return x0, x1


def explicit_quartic_step(qmap: ExplicitQuarticMap, window: Sequence) -> np.ndarray:
    """(q_2, p_2) from ((q_0, p_0), (q_1, p_1))."""
    (q0, p0), (q1, p1) = qmap._window(window)
    a, b, c, d, e, h = qmap.a, qmap.b, qmap.c, qmap.d, qmap.e, qmap.h
    den = qmap.denominator(window)
    if den == 0:
        raise SingularStepError("Explicit quartic map: vanishing denominator.")
    q2 = q0 + 2 * h * (
        b * q0**2 * q1 + c * (2 * p0 * q0 * q1 + p1 * q0**2) + d * (2 * p0 * p1 * q0 + p0**2 * q1) + e * p0**2 * p1
    )
    p2 = p0 - 2 * h * (
        a * q0**2 * q1 + b * (2 * p0 * q0 * q1 + p1 * q0**2) + c * (2 * p0 * p1 * q0 + p0**2 * q1) + d * p0**2 * p1
    )
    return qmap.mode.vector([q2 / den, p2 / den])
