"""k-integrals of the Hamiltonian polar map.

Along x_0, x_1, ... the values omega(x_m, x_{m+1}), with omega(u, v) = u^T Omega v,
are invariant under the k-th iterate. Under the scaling x_m -> lambda_m x_m
(lambda periodic in m with period k, product one) each value picks up
lambda_m lambda_{m+1}, so the product over one window is unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import Sequence

import numpy as np

from polarint.algebra.scalar import Scalar
from polarint.errors import ArityError, StructureMatrixError
from polarint.hamiltonian.spec import HamiltonianSpec


@dataclass(frozen=True)
class KIntegralSet:
    """omega(x_m, x_{m+1}) for m < k, and the same divided by h(k+2)."""

    values: tuple[Scalar, ...]
    normalized: tuple[Scalar, ...]

    @property
    def k(self) -> int:
        return len(self.values)


def omega(spec: HamiltonianSpec, u, v) -> Scalar:
    if spec.Omega is None:
        raise StructureMatrixError(
            "k-integrals need an invertible structure matrix K.\n"
            "Degenerate K supports the measure checks only."
        )
    u = spec.mode.vector(u)
    v = spec.mode.vector(v)
    return u @ spec.Omega @ v


def _extended(spec: HamiltonianSpec, points: Sequence) -> list[np.ndarray]:
    if len(points) < 2:
        raise ArityError(f"k-integrals need the k+1 points x_0, ..., x_k; got {len(points)}.")
    spec.resolve_k(len(points) - 1)
    out = [spec.mode.vector(p) for p in points]
    if any(p.shape != (spec.dimension,) for p in out):
        raise ArityError(f"Window points must have length {spec.dimension}.")
    return out


def _values(spec: HamiltonianSpec, points: Sequence) -> list[Scalar]:
    xs = _extended(spec, points)
    return [omega(spec, a, b) for a, b in zip(xs, xs[1:])]


def k_integrals(spec: HamiltonianSpec, points: Sequence, h: Scalar) -> KIntegralSet:
    values = _values(spec, points)
    scale = spec.mode.as_scalar(h) * (len(values) + 2)
    return KIntegralSet(tuple(values), tuple(v / scale for v in values))


def product_integral(spec: HamiltonianSpec, points: Sequence) -> Scalar:
    return reduce(mul, _values(spec, points), spec.mode.one())


def even_k_two_integrals(spec: HamiltonianSpec, points: Sequence) -> tuple[Scalar, Scalar]:
    """Products of alternate values: (w_0 w_2 ... w_{k-2}, w_1 w_3 ... w_{k-1})."""
    values = _values(spec, points)
    if len(values) % 2:
        raise ArityError(f"The 2-integrals exist for even k only, got k={len(values)}.")
    one = spec.mode.one()
    return reduce(mul, values[0::2], one), reduce(mul, values[1::2], one)
