"""Scalar modes: IEEE-754 doubles or exact rationals.

A run picks one mode and every structure built during the run carries it.
Parsing (``coerce``) is lenient about input syntax; arithmetic inputs
(``as_scalar``) are strict and refuse values from the other mode.
"""

from __future__ import annotations

import numbers
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from polarint.errors import FieldFormatError, ScalarModeError

Scalar = Union[float, Fraction]


class ScalarMode(str, Enum):
    DOUBLE = "double"
    RATIONAL = "rational"

    @classmethod
    def parse(cls, value: str | ScalarMode) -> ScalarMode:
        if isinstance(value, ScalarMode):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise FieldFormatError(
                f"Unknown scalar mode {value!r}. Expected one of: "
                + ", ".join(m.value for m in cls)
            ) from None

    @property
    def exact(self) -> bool:
        return self is ScalarMode.RATIONAL

    @property
    def dtype(self) -> type:
        return object if self.exact else float

    def coerce(self, value: object) -> Scalar:
        """Convert a serialized number ("p/q", decimal literal, int, JSON float)."""
        if isinstance(value, bool):
            raise FieldFormatError(f"Expected a number, got boolean {value!r}")
        try:
            if self.exact:
                if isinstance(value, float):
                    # JSON floats are decimal literals; go through the text form
                    return Fraction(repr(value))
                if isinstance(value, (str, numbers.Rational)):
                    return Fraction(value)
            else:
                if isinstance(value, str):
                    return float(Fraction(value))
                if isinstance(value, numbers.Real):
                    return float(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldFormatError(f"Cannot parse {value!r} as a number: {exc}") from None
        raise FieldFormatError(f"Expected a number or numeric string, got {value!r}")

    def as_scalar(self, value: object) -> Scalar:
        """Admit a runtime value into this mode, rejecting the other mode's type."""
        if self.exact:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, numbers.Integral):
                return Fraction(int(value))
            raise ScalarModeError(
                f"Rational mode received {type(value).__name__} value {value!r}; "
                "pass Fractions or integers (or strings through coerce)."
            )
        if isinstance(value, Fraction):
            raise ScalarModeError(
                f"Double mode received Fraction {value}; convert explicitly or use rational mode."
            )
        if isinstance(value, numbers.Real):
            return float(value)
        raise ScalarModeError(f"Expected a real number, got {type(value).__name__}")

    def vector(self, values: Iterable[object]) -> np.ndarray:
        return np.array([self.as_scalar(v) for v in values], dtype=self.dtype)

    def parse_vector(self, values: Iterable[object]) -> np.ndarray:
        return np.array([self.coerce(v) for v in values], dtype=self.dtype)

    def matrix(self, rows: Iterable[Iterable[object]]) -> np.ndarray:
        data = [[self.as_scalar(v) for v in row] for row in rows]
        return np.array(data, dtype=self.dtype)

    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    def zeros(self, shape: int | tuple[int, ...]) -> np.ndarray:
        out = np.empty(shape, dtype=self.dtype)
        out.fill(self.zero())
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def format(self, value: Scalar) -> str:
        """Lossless text form: "p/q" (or "p") for rationals, shortest repr for doubles."""
        if self.exact:
            return str(self.as_scalar(value))
        return repr(float(value))
