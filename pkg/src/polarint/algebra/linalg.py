"""Small dense linear algebra in either scalar mode.

Double mode defers to numpy's LAPACK routines (LU with partial pivoting).
Rational mode runs exact Gaussian elimination over ``Fraction`` entries, so a
system is singular there only when a pivot is exactly zero.
"""

from __future__ import annotations

import logging

import numpy as np

from polarint.algebra.scalar import ScalarMode
from polarint.errors import SingularStepError

logger = logging.getLogger(__name__)

# Double-mode systems with a larger 2-norm condition number count as singular.
SINGULAR_CONDITION = 1e13


def singularity_rule(mode: ScalarMode) -> dict:
    """The test that marks a step singular, as recorded in reports."""
    if mode.exact:
        return {"criterion": "zero-pivot"}
    return {"criterion": "condition-number", "max_condition": SINGULAR_CONDITION}


def condition(a: np.ndarray, mode: ScalarMode) -> float | None:
    """2-norm condition number in double mode; ``None`` in rational mode."""
    if mode.exact:
        return None
    if not np.all(np.isfinite(a)):
        return float("inf")
    return float(np.linalg.cond(a))


def _exact_reduce(a: np.ndarray, rhs: np.ndarray | None):
    """Forward elimination over Fractions. Returns (rows, rhs_rows, det)."""
    n = a.shape[0]
    rows = [list(a[i]) for i in range(n)]
    extra = [list(np.atleast_1d(rhs[i])) for i in range(n)] if rhs is not None else None
    det = ScalarMode.RATIONAL.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return rows, extra, ScalarMode.RATIONAL.zero()
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            if extra is not None:
                extra[col], extra[pivot] = extra[pivot], extra[col]
            det = -det
        p = rows[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = rows[r][col] / p
            if factor == 0:
                continue
            rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
            if extra is not None:
                extra[r] = [x - factor * y for x, y in zip(extra[r], extra[col])]
    return rows, extra, det


def det(a: np.ndarray, mode: ScalarMode):
    if a.shape[0] == 0:
        return mode.one()
    if mode.exact:
        return _exact_reduce(a, None)[2]
    return float(np.linalg.det(a))


def solve(a: np.ndarray, b: np.ndarray, mode: ScalarMode) -> tuple[np.ndarray, float | None]:
    """Solve ``a @ x = b`` (``b`` a vector or a matrix of right-hand sides).

    Returns ``(x, condition)``; raises SingularStepError on a singular system.
    """
    if mode.exact:
        rows, extra, d = _exact_reduce(a, b)
        if d == 0:
            raise SingularStepError("Linear system is singular (zero pivot in exact elimination).")
        n = a.shape[0]
        width = len(extra[0]) if n else 0
        x = [[mode.zero()] * width for _ in range(n)]
        for i in reversed(range(n)):
            for j in range(width):
                acc = extra[i][j] - sum(rows[i][c] * x[c][j] for c in range(i + 1, n))
                x[i][j] = acc / rows[i][i]
        out = np.array(x, dtype=object)
        return (out[:, 0] if b.ndim == 1 else out), None

    cond = condition(a, mode)
    if cond is None or not np.isfinite(cond) or cond > SINGULAR_CONDITION:
        raise SingularStepError(
            f"Linear system is numerically singular (condition {cond:.3e} > {SINGULAR_CONDITION:.0e}).",
            condition=cond,
        )
    try:
        x = np.linalg.solve(a.astype(float), b.astype(float))
    except np.linalg.LinAlgError as exc:
        raise SingularStepError(f"Linear system is singular: {exc}", condition=cond) from None
    return x, cond


def inverse(a: np.ndarray, mode: ScalarMode) -> np.ndarray:
    inv, _ = solve(a, mode.eye(a.shape[0]), mode)
    return inv
