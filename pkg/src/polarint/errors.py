"""Exception types raised by polarint.

Each error also derives from the builtin it refines, so callers that only
care about ``ValueError`` or ``ArithmeticError`` keep working.
"""

from __future__ import annotations


class PolarintError(Exception):
    """Base class for all polarint errors."""


class FieldFormatError(PolarintError, ValueError):
    """A field, Hamiltonian or trajectory description is malformed."""


class NotHomogeneousError(PolarintError, ValueError):
    """An operation needed a homogeneous polynomial and got something else."""


class ArityError(PolarintError, ValueError):
    """Wrong number or length of argument vectors."""


class ScalarModeError(PolarintError, TypeError):
    """Values from different scalar modes were mixed."""


class StructureMatrixError(PolarintError, ValueError):
    """The structure matrix K is not antisymmetric, or not invertible where required."""


class BootstrapError(PolarintError, ArithmeticError):
    """The reference stepper used to build a starting window failed."""


class ConfigError(PolarintError, ValueError):
    """A run configuration failed validation."""


class SingularStepError(PolarintError, ArithmeticError):
    """A linear solve hit the indeterminacy locus of the map."""

    def __init__(self, message: str, *, step_index: int | None = None, condition: float | None = None):
        super().__init__(message)
        self.step_index = step_index
        self.condition = condition


class DegreeError(PolarintError, ValueError):
    """A polynomial's degree does not fit the requested construction."""
