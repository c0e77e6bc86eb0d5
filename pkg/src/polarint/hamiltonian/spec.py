"""Hamiltonian systems x' = K grad H with constant antisymmetric K."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Mapping

import numpy as np

from polarint.algebra import linalg
from polarint.algebra.polarize import SymMultilinearForm, polarize
from polarint.algebra.polyfield import (
    PolyVectorField,
    ScalarPoly,
    load_description,
    evaluate_poly,
    gradient,
    parse_scalar_poly,
)
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import (
    ArityError,
    DegreeError,
    FieldFormatError,
    NotHomogeneousError,
    SingularStepError,
    StructureMatrixError,
)
from polarint.integrators.polarmap import polar_step
from polarint.integrators.window import PolarWindow, StepResult

logger = logging.getLogger(__name__)


def symplectic_structure(n: int, mode: ScalarMode) -> np.ndarray:
    """Block-diagonal K with blocks [[0, 1], [-1, 0]] on coordinates (q1, p1, q2, p2, ...)."""
    if n % 2:
        raise StructureMatrixError(f"The canonical structure matrix needs an even dimension, got {n}.")
    K = mode.zeros((n, n))
    for i in range(0, n, 2):
        K[i, i + 1] = mode.one()
        K[i + 1, i] = -mode.one()
    return K


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """H homogeneous of degree k+2, structure matrix K and, when K is invertible, Omega = K^-1.

    ``degree`` pins the degree of a zero Hamiltonian; it is otherwise read off H.
    """

    H: ScalarPoly
    K: np.ndarray
    Omega: np.ndarray | None
    mode: ScalarMode
    degree: int | None = None

    @classmethod
    def build(cls, H: ScalarPoly, K, degree: int | None = None) -> HamiltonianSpec:
        mode = H.mode
        n = H.dimension
        K = mode.matrix(K)
        if K.shape != (n, n):
            raise StructureMatrixError(f"K has shape {K.shape}, expected ({n}, {n}).")
        if np.any(K.T != -K):
            raise StructureMatrixError("K must be antisymmetric (K^T = -K).")
        if not H.is_homogeneous:
            raise NotHomogeneousError(
                f"Hamiltonian has monomials of degrees {sorted({m.degree for m in H.monomials})}; "
                "it must be homogeneous."
            )
        d = H.degree if H.degree is not None else degree
        if H.degree is not None and degree is not None and degree != H.degree:
            raise DegreeError(f"Hamiltonian has degree {H.degree}, not the declared {degree}.")
        if d is not None and d < 3:
            raise DegreeError(f"A Hamiltonian of degree {d} gives no polar map; need degree >= 3.")
        try:
            Omega = linalg.inverse(K, mode)
        except SingularStepError:
            logger.info("structure matrix is singular; k-integrals unavailable")
            Omega = None
        if Omega is not None and mode.exact and np.any(K @ Omega != mode.eye(n)):
            raise StructureMatrixError("K @ Omega is not the identity.")
        return cls(H, K, Omega, mode, d)

    @property
    def dimension(self) -> int:
        return self.H.dimension

    @property
    def k(self) -> int | None:
        return None if self.degree is None else self.degree - 2

    def resolve_k(self, k: int | None) -> int:
        """Step count of this system, checked against (or supplied by) a window."""
        if self.k is None:
            if k is None:
                raise DegreeError("A zero Hamiltonian needs an explicit step count.")
            return k
        if k is not None and k != self.k:
            raise ArityError(f"A degree-{self.degree} Hamiltonian drives a {self.k}-step map, got {k}.")
        return self.k

    @cached_property
    def field(self) -> PolyVectorField:
        return hamiltonian_field(self)

    def form(self, k: int | None = None) -> SymMultilinearForm:
        """Polarization F of K grad H, of order k+1."""
        return polarize(self.field, degree=self.resolve_k(k) + 1)

    def tensor(self, k: int | None = None) -> SymMultilinearForm:
        """Polarization of H, of order k+2 (the tensor up to its factorial)."""
        return polarize(self.H, degree=self.resolve_k(k) + 2)


def hamiltonian_field(spec: HamiltonianSpec) -> PolyVectorField:
    grad = gradient(spec.H)
    n = spec.dimension
    components = []
    for i in range(n):
        terms = []
        for j in range(n):
            if spec.K[i, j] != 0:
                terms.extend((spec.K[i, j] * m.coeff, m.exponents) for m in grad.components[j])
        components.append(terms)
    return PolyVectorField.from_terms(n, components, spec.mode)


def polar_hamiltonian_step(spec: HamiltonianSpec, window: PolarWindow) -> StepResult:
    """Polar map of K grad H; the same solve as ``polar_step`` on the polarized field."""
    return polar_step(spec.form(window.k), window)


def modified_energy(spec: HamiltonianSpec, x) -> Scalar:
    """H(x), the small-step limit of the normalized k-integrals."""
    return evaluate_poly(spec.H, x)


def parse_hamiltonian(description: str | Path | Mapping, mode: ScalarMode = ScalarMode.DOUBLE) -> HamiltonianSpec:
    """Parse ``{"dimension", "monomials", "K"}``; a missing K means the canonical block structure."""
    data = load_description(description)
    H = parse_scalar_poly(data, mode)
    raw_K = data.get("K")
    if raw_K is None:
        K = symplectic_structure(H.dimension, mode)
    else:
        if not isinstance(raw_K, list) or not all(isinstance(row, list) for row in raw_K):
            raise FieldFormatError("'K' must be a row-major list of lists.")
        K = np.array([[mode.coerce(v) for v in row] for row in raw_K], dtype=mode.dtype)
    degree = data.get("degree")
    if degree is not None and (not isinstance(degree, int) or isinstance(degree, bool)):
        raise FieldFormatError(f"'degree' must be an integer, got {degree!r}.")
    return HamiltonianSpec.build(H, K, degree)


def dump_hamiltonian(spec: HamiltonianSpec) -> dict:
    fmt = spec.mode.format if spec.mode.exact else float
    out = {
        "dimension": spec.dimension,
        "monomials": [{"coeff": fmt(m.coeff), "exponents": list(m.exponents)} for m in spec.H.monomials],
        "K": [[fmt(v) for v in row] for row in spec.K],
    }
    if spec.degree is not None:
        out["degree"] = spec.degree
    return out
