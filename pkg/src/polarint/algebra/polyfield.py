"""Polynomial vector fields and scalar polynomials in monomial form.

Monomials are kept in canonical order (lexicographic on exponent vectors),
with equal exponents merged and zero coefficients dropped, so two equal
polynomials have identical representations.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ArityError, FieldFormatError

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class Monomial:
    coeff: Scalar
    exponents: Exponents

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def evaluate(self, x: np.ndarray) -> Scalar:
        value = self.coeff
        for xi, e in zip(x, self.exponents):
            if e:
                value = value * xi**e
        return value


def canonical_monomials(
    terms: Iterable[tuple[Scalar, Sequence[int]]], dimension: int, mode: ScalarMode
) -> tuple[Monomial, ...]:
    merged: dict[Exponents, Scalar] = defaultdict(mode.zero)
    for coeff, exponents in terms:
        exps = tuple(int(e) for e in exponents)
        if len(exps) != dimension:
            raise FieldFormatError(
                f"Exponent vector {list(exps)} has length {len(exps)}, expected dimension {dimension}."
            )
        if any(e < 0 for e in exps):
            raise FieldFormatError(f"Negative exponent in {list(exps)}.")
        merged[exps] = merged[exps] + mode.as_scalar(coeff)
    return tuple(Monomial(c, e) for e, c in sorted(merged.items()) if c != 0)


def _degree_of(monomials: Iterable[Monomial]) -> int | None:
    degrees = {m.degree for m in monomials}
    return max(degrees) if degrees else None


@dataclass(frozen=True)
class ScalarPoly:
    dimension: int
    monomials: tuple[Monomial, ...]
    mode: ScalarMode = ScalarMode.DOUBLE

    @classmethod
    def from_terms(
        cls, dimension: int, terms: Iterable[tuple[Scalar, Sequence[int]]], mode: ScalarMode
    ) -> ScalarPoly:
        return cls(dimension, canonical_monomials(terms, dimension, mode), mode)

    @property
    def degree(self) -> int | None:
        """Maximal monomial degree, ``None`` for the zero polynomial."""
        return _degree_of(self.monomials)

    @property
    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self.monomials}) <= 1


@dataclass(frozen=True)
class PolyVectorField:
    dimension: int
    components: tuple[tuple[Monomial, ...], ...]
    mode: ScalarMode = ScalarMode.DOUBLE

    def __post_init__(self):
        if len(self.components) != self.dimension:
            raise FieldFormatError(
                f"Field of dimension {self.dimension} has {len(self.components)} components."
            )

    @classmethod
    def from_terms(
        cls,
        dimension: int,
        components: Sequence[Iterable[tuple[Scalar, Sequence[int]]]],
        mode: ScalarMode,
    ) -> PolyVectorField:
        return cls(
            dimension,
            tuple(canonical_monomials(c, dimension, mode) for c in components),
            mode,
        )

    @classmethod
    def zero(cls, dimension: int, mode: ScalarMode) -> PolyVectorField:
        return cls(dimension, tuple(() for _ in range(dimension)), mode)

    @property
    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(m for comp in self.components for m in comp)

    @property
    def degree(self) -> int | None:
        """Maximal monomial degree, ``None`` for the zero field."""
        return _degree_of(self.monomials)

    @property
    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self.monomials}) <= 1

    @property
    def is_zero(self) -> bool:
        return not self.monomials


def _check_point(x: Sequence[Scalar] | np.ndarray, dimension: int, mode: ScalarMode) -> np.ndarray:
    point = mode.vector(x)
    if point.shape != (dimension,):
        raise ArityError(f"Point has length {len(point)}, expected {dimension}.")
    return point


def evaluate_poly(H: ScalarPoly, x: Sequence[Scalar] | np.ndarray) -> Scalar:
    point = _check_point(x, H.dimension, H.mode)
    return sum((m.evaluate(point) for m in H.monomials), H.mode.zero())


def evaluate_field(f: PolyVectorField, x: Sequence[Scalar] | np.ndarray) -> np.ndarray:
    point = _check_point(x, f.dimension, f.mode)
    out = f.mode.zeros(f.dimension)
    for i, comp in enumerate(f.components):
        out[i] = sum((m.evaluate(point) for m in comp), f.mode.zero())
    return out


def degree_split(f: PolyVectorField) -> dict[int, PolyVectorField]:
    """Split ``f`` into homogeneous parts keyed by degree."""
    parts: dict[int, list[list[Monomial]]] = {}
    for i, comp in enumerate(f.components):
        for m in comp:
            parts.setdefault(m.degree, [[] for _ in range(f.dimension)])[i].append(m)
    return {
        d: PolyVectorField(f.dimension, tuple(tuple(c) for c in comps), f.mode)
        for d, comps in sorted(parts.items())
    }


def gradient(H: ScalarPoly) -> PolyVectorField:
    components = []
    for i in range(H.dimension):
        terms = []
        for m in H.monomials:
            e = m.exponents[i]
            if e:
                exps = list(m.exponents)
                exps[i] -= 1
                terms.append((m.coeff * e, exps))
        components.append(terms)
    return PolyVectorField.from_terms(H.dimension, components, H.mode)


def homogenize(f: PolyVectorField, degree: int | None = None) -> PolyVectorField:
    """Suspend ``f`` to a homogeneous field on R^(n+1) with a trailing ``w`` (ẇ = 0).

    The target degree defaults to the maximal degree of ``f`` and is never
    below 1; restricting the result to w = 1 recovers ``f``.
    """
    d = max(f.degree or 0, 1)
    if degree is not None:
        if degree < d:
            raise FieldFormatError(f"Cannot homogenize a degree-{d} field to degree {degree}.")
        d = degree
    components = [
        [(m.coeff, m.exponents + (d - m.degree,)) for m in comp] for comp in f.components
    ]
    components.append([])
    return PolyVectorField.from_terms(f.dimension + 1, components, f.mode)


def _parse_monomials(items: object, dimension: int, mode: ScalarMode, where: str):
    if not isinstance(items, list):
        raise FieldFormatError(f"{where}: expected a list of monomials, got {type(items).__name__}.")
    terms = []
    for j, item in enumerate(items):
        if not isinstance(item, Mapping) or "coeff" not in item or "exponents" not in item:
            raise FieldFormatError(
                f"{where}[{j}]: each monomial needs 'coeff' and 'exponents' keys, got {item!r}."
            )
        exps = item["exponents"]
        if not isinstance(exps, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in exps):
            raise FieldFormatError(f"{where}[{j}]: exponents must be a list of integers, got {exps!r}.")
        terms.append((mode.coerce(item["coeff"]), exps))
    return canonical_monomials(terms, dimension, mode)


def load_description(description: str | Path | Mapping) -> Mapping:
    if isinstance(description, Mapping):
        return description
    if isinstance(description, Path):
        description = description.read_text()
    try:
        data = json.loads(description)
    except json.JSONDecodeError as exc:
        raise FieldFormatError(f"Field description is not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise FieldFormatError("Field description must be a JSON object.")
    return data


def _dimension(data: Mapping) -> int:
    dim = data.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FieldFormatError(f"'dimension' must be a positive integer, got {dim!r}.")
    return dim


def parse_field(description: str | Path | Mapping, mode: ScalarMode = ScalarMode.DOUBLE) -> PolyVectorField:
    """Parse ``{"dimension": n, "components": [[{"coeff", "exponents"}, ...], ...]}``.

    An empty ``components`` list denotes the zero field.
    """
    data = load_description(description)
    dim = _dimension(data)
    comps = data.get("components", [])
    if not isinstance(comps, list):
        raise FieldFormatError("'components' must be a list of monomial lists.")
    if not comps:
        return PolyVectorField.zero(dim, mode)
    if len(comps) != dim:
        raise FieldFormatError(f"'components' has {len(comps)} entries, expected dimension {dim}.")
    parsed = PolyVectorField(
        dim,
        tuple(_parse_monomials(c, dim, mode, f"components[{i}]") for i, c in enumerate(comps)),
        mode,
    )
    logger.debug("parsed field: n=%d, %d monomials", dim, len(parsed.monomials))
    return parsed


def parse_scalar_poly(description: str | Path | Mapping, mode: ScalarMode = ScalarMode.DOUBLE) -> ScalarPoly:
    """Parse ``{"dimension": n, "monomials": [...]}``."""
    data = load_description(description)
    dim = _dimension(data)
    return ScalarPoly(dim, _parse_monomials(data.get("monomials", []), dim, mode, "monomials"), mode)


def dump_field(f: PolyVectorField) -> dict:
    """Serializable form accepted by ``parse_field``."""
    return {
        "dimension": f.dimension,
        "components": [
            [{"coeff": _dump_coeff(m.coeff, f.mode), "exponents": list(m.exponents)} for m in comp]
            for comp in f.components
        ],
    }


def _dump_coeff(value: Scalar, mode: ScalarMode) -> str | float:
    return mode.format(value) if mode.exact else float(value)

