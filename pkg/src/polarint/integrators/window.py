"""State carried by the multistep maps: windows, step results, trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ArityError, ConfigError


@dataclass(frozen=True, eq=False)
class PolarWindow:
    """The k points x_0, ..., x_{k-1} of a k-step map, plus the step size.

    ``step_index`` is the time index of the newest point x_{k-1}.
    """

    points: tuple[np.ndarray, ...]
    h: Scalar
    mode: ScalarMode
    step_index: int = 0

    @classmethod
    def build(
        cls,
        points: Sequence[Sequence[Scalar]],
        h: Scalar,
        mode: ScalarMode,
        step_index: int | None = None,
    ) -> PolarWindow:
        if not points:
            raise ArityError("A window needs at least one point.")
        arrays = tuple(mode.vector(p) for p in points)
        n = arrays[0].shape[0]
        if any(a.shape != (n,) for a in arrays):
            raise ArityError(f"Window points must all have length {n}.")
        index = len(arrays) - 1 if step_index is None else step_index
        return cls(arrays, mode.as_scalar(h), mode, index)

    @property
    def k(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points[0].shape[0]

    def shifted(self, new_point: np.ndarray) -> PolarWindow:
        """Window (x_1, ..., x_k) after a step produced x_k."""
        return PolarWindow(self.points[1:] + (new_point,), self.h, self.mode, self.step_index + 1)

    def with_points(self, points: Sequence[np.ndarray]) -> PolarWindow:
        return PolarWindow.build(points, self.h, self.mode, self.step_index)

    def scaled(self, factors: Sequence[Scalar]) -> PolarWindow:
        if len(factors) != self.k:
            raise ArityError(f"Need {self.k} scaling factors, got {len(factors)}.")
        return self.with_points([self.mode.as_scalar(lam) * x for lam, x in zip(factors, self.points)])


@dataclass(frozen=True, eq=False)
class StepResult:
    """Outcome of one step.

    ``residual`` is max|x_k - x_0 - k·h·F(x_0, ..., x_k)|: exactly zero in
    rational mode. ``extension`` marks steps taken through a suspension of
    degree above two.
    """

    new_point: np.ndarray | None
    solve_condition: float | None
    singular: bool
    residual: Scalar | None = None
    extension: bool = False


class BootstrapMethod(str, Enum):
    REFERENCE_ONE_STEP = "reference-one-step"
    EXACT_PROVIDED = "exact-provided"


@dataclass(frozen=True)
class BootstrapConfig:
    method: BootstrapMethod = BootstrapMethod.REFERENCE_ONE_STEP
    substeps: int = 100

    def __post_init__(self):
        object.__setattr__(self, "method", BootstrapMethod(self.method))
        if not isinstance(self.substeps, int) or self.substeps < 1:
            raise ConfigError(f"bootstrap substeps must be an integer >= 1, got {self.substeps!r}.")


@dataclass(eq=False)
class Trajectory:
    """Every point of a run, each recorded once, starting with the initial window."""

    points: list[np.ndarray]
    h: Scalar
    mode: ScalarMode
    start_index: int = 0
    singular: bool = False
    singular_at: int | None = None
    extension: bool = False

    @property
    def indices(self) -> list[int]:
        return list(range(self.start_index, self.start_index + len(self.points)))

    @property
    def times(self) -> list[Scalar]:
        return [i * self.h for i in self.indices]

    def __len__(self) -> int:
        return len(self.points)
