"""Shared fixtures: seeded generators of fields, Hamiltonians and windows."""

from __future__ import annotations

import itertools
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from polarint.algebra import PolyVectorField, ScalarMode, ScalarPoly
from polarint.hamiltonian import HamiltonianSpec, symplectic_structure
from polarint.integrators import PolarWindow

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

R = ScalarMode.RATIONAL
D = ScalarMode.DOUBLE


def exponent_vectors(n: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of length n summing to ``degree``."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), degree):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return out


def small_rational(rng: np.random.Generator) -> Fraction:
    """Numerator in [-5, 5] without zero, denominator in [1, 5]."""
    num = int(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]))
    return Fraction(num, int(rng.integers(1, 6)))


def _value(v: Fraction, mode: ScalarMode):
    return v if mode.exact else float(v)


def _terms(rng, n: int, degree: int, mode: ScalarMode, density: float) -> list:
    exps = exponent_vectors(n, degree)
    chosen = [e for e in exps if rng.random() < density] or [exps[int(rng.integers(len(exps)))]]
    return [(_value(small_rational(rng), mode), e) for e in chosen]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def random_field(rng):
    """Factory: random homogeneous field of the given degree (inhomogeneous with ``degrees``)."""

    def make(n: int, degree: int, mode: ScalarMode = R, *, degrees=None, density: float = 0.5):
        degrees = degrees or [degree]
        components = [
            [t for d in degrees for t in _terms(rng, n, d, mode, density)] for _ in range(n)
        ]
        return PolyVectorField.from_terms(n, components, mode)

    return make


@pytest.fixture
def random_hamiltonian(rng):
    """Factory: random homogeneous H with the canonical structure matrix."""

    def make(n: int, degree: int, mode: ScalarMode = R, density: float = 0.6):
        H = ScalarPoly.from_terms(n, _terms(rng, n, degree, mode, density), mode)
        return HamiltonianSpec.build(H, symplectic_structure(n, mode), degree=degree)

    return make


@pytest.fixture
def random_window(rng):
    """Factory: window of k points in R^n with small-height rational coordinates."""

    def make(n: int, k: int, h, mode: ScalarMode = R) -> PolarWindow:
        points = [[_value(small_rational(rng), mode) for _ in range(n)] for _ in range(k)]
        return PolarWindow.build(points, h, mode)

    return make
