"""Symmetric multilinear forms obtained by polarizing homogeneous polynomials.

A degree-m monomial c·x^e contributes the symmetric coefficient
c / multinomial(m; e) to the multi-index e. Evaluating the form sums that
coefficient over every distinct assignment of the m argument slots to the
variables of e, so F(x, ..., x) reproduces the polynomial.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from polarint.algebra.polyfield import (
    Exponents,
    PolyVectorField,
    ScalarPoly,
    evaluate_field,
    evaluate_poly,
)
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ArityError, NotHomogeneousError

logger = logging.getLogger(__name__)

Polynomial = Union[PolyVectorField, ScalarPoly]


def multinomial(exponents: Sequence[int]) -> int:
    out = math.factorial(sum(exponents))
    for e in exponents:
        out //= math.factorial(e)
    return out


@lru_cache(maxsize=None)
def slot_assignments(exponents: Exponents) -> tuple[tuple[int, ...], ...]:
    """Distinct orderings of the variable multiset described by ``exponents``."""
    base = [i for i, e in enumerate(exponents) for _ in range(e)]
    return tuple(sorted(set(itertools.permutations(base))))


@dataclass(frozen=True)
class SymMultilinearForm:
    """Symmetric form of ``order`` vector arguments in R^dimension.

    ``coefficients[c]`` holds ``(multi_index, symmetric_coefficient)`` pairs for
    output component ``c``. Scalar-valued forms (polarized Hamiltonians) have a
    single component and evaluate to a scalar.
    """

    order: int
    dimension: int
    coefficients: tuple[tuple[tuple[Exponents, Scalar], ...], ...]
    mode: ScalarMode
    scalar_valued: bool = False

    @property
    def output_arity(self) -> int:
        return len(self.coefficients)

    @property
    def k(self) -> int:
        """Step count of the polar map built on a vector-valued form."""
        return self.order - 1


def _homogeneous_degree(p: Polynomial, degree: int | None) -> int:
    degrees = {m.degree for m in p.monomials}
    if len(degrees) > 1:
        raise NotHomogeneousError(
            f"Cannot polarize a polynomial with monomials of degrees {sorted(degrees)}.\n"
            "Split it with degree_split or suspend it with homogenize first."
        )
    if degrees:
        (found,) = degrees
        if degree is not None and degree != found:
            raise NotHomogeneousError(f"Polynomial has degree {found}, not the requested {degree}.")
        degree = found
    if degree is None:
        raise NotHomogeneousError("The zero polynomial needs an explicit degree to be polarized.")
    if degree < 1:
        raise NotHomogeneousError(f"Polarization needs degree >= 1, got {degree}.")
    return degree


def polarize(p: Polynomial, degree: int | None = None) -> SymMultilinearForm:
    """Polarize a homogeneous field or scalar polynomial.

    ``degree`` is only needed for the zero polynomial, whose degree is not
    determined by its monomials.
    """
    m = _homogeneous_degree(p, degree)
    scalar_valued = isinstance(p, ScalarPoly)
    components = (p.monomials,) if scalar_valued else p.components
    coefficients = tuple(
        tuple((mono.exponents, mono.coeff / multinomial(mono.exponents)) for mono in comp)
        for comp in components
    )
    return SymMultilinearForm(m, p.dimension, coefficients, p.mode, scalar_valued)


def _checked_args(F: SymMultilinearForm, args: Sequence, expected: int) -> list[np.ndarray]:
    if len(args) != expected:
        raise ArityError(f"Form of order {F.order} needs {expected} arguments here, got {len(args)}.")
    points = [F.mode.vector(a) for a in args]
    for a in points:
        if a.shape != (F.dimension,):
            raise ArityError(f"Argument has length {a.shape[0]}, expected {F.dimension}.")
    return points


def _contract(F: SymMultilinearForm, args: list[np.ndarray]) -> np.ndarray:
    """Fix the first ``len(args)`` slots; the result is indexed [component, free slots...]."""
    fixed = len(args)
    free = F.order - fixed
    out = F.mode.zeros((F.output_arity,) + (F.dimension,) * free)
    for comp, terms in enumerate(F.coefficients):
        for exps, coeff in terms:
            for slots in slot_assignments(exps):
                value = coeff
                for arg, var in zip(args, slots[:fixed]):
                    value = value * arg[var]
                    if not value:
                        break
                if value:
                    out[(comp,) + slots[fixed:]] += value
    return out


def eval_form(F: SymMultilinearForm, args: Sequence) -> np.ndarray | Scalar:
    out = _contract(F, _checked_args(F, args, F.order))
    return out[0] if F.scalar_valued else out


def contract_to_matrix(F: SymMultilinearForm, args: Sequence) -> np.ndarray:
    """Matrix M of the last slot: F(args..., v) = M @ v."""
    if F.scalar_valued:
        raise ArityError("contract_to_matrix needs a vector-valued form.")
    return _contract(F, _checked_args(F, args, F.order - 1))


def contract_to_bilinear(form: SymMultilinearForm, args: Sequence) -> np.ndarray:
    """Symmetric matrix S of the tensor 𝖧 = m!·form with the first m-2 slots fixed.

    With H(x) = 𝖧(x, ..., x)/m!, the diagonal case gives S = (m-2)!·H''(x).
    """
    if not form.scalar_valued:
        raise ArityError("contract_to_bilinear needs a scalar-valued form.")
    S = _contract(form, _checked_args(form, args, form.order - 2))[0]
    return S * math.factorial(form.order)


def eval_form_subsets(p: Polynomial, args: Sequence) -> np.ndarray | Scalar:
    """Polarization through inclusion-exclusion over nonempty argument subsets.

    Evaluates ``p`` at the 2^m - 1 subset averages, using homogeneity to
    rescale. Kept as an oracle independent of ``polarize``.
    """
    m = _homogeneous_degree(p, len(args))
    points = [p.mode.vector(a) for a in args]
    evaluate = evaluate_poly if isinstance(p, ScalarPoly) else evaluate_field
    total = None
    for size in range(1, m + 1):
        weight = (-1) ** (m - size) * size**m
        for subset in itertools.combinations(points, size):
            centre = sum(subset[1:], subset[0].copy()) / size
            term = evaluate(p, centre) * weight
            total = term if total is None else total + term
    return total / math.factorial(m)
