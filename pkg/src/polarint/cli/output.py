"""Trajectory CSV files, JSON reports and the printed form of a polarization."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable

import pandas as pd

from polarint.algebra.polarize import SymMultilinearForm, slot_assignments
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.analysis.checks import CheckResult
from polarint.errors import FieldFormatError
from polarint.integrators.window import Trajectory

REPORT_SCHEMA = 1


def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    """Columns step_index, t, x[0], ..., x[n-1]; every value in its lossless text form."""
    fmt = traj.mode.format
    n = traj.points[0].shape[0] if traj.points else 0
    rows = [
        [index, fmt(t)] + [fmt(v) for v in point]
        for index, t, point in zip(traj.indices, traj.times, traj.points)
    ]
    return pd.DataFrame(rows, columns=["step_index", "t"] + [f"x[{i}]" for i in range(n)])


def write_trajectory(traj: Trajectory, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory_frame(traj).to_csv(path, index=False)


def read_trajectory(path: Path, mode: ScalarMode, h: Scalar) -> Trajectory:
    """Read a file written by ``write_trajectory``; indices must be consecutive."""
    if not path.is_file():
        raise FieldFormatError(f"Trajectory file not found: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    coords = [c for c in frame.columns if c.startswith("x[")]
    if list(frame.columns[:2]) != ["step_index", "t"] or not coords:
        raise FieldFormatError(f"{path}: expected columns step_index, t, x[0], ...; got {list(frame.columns)}.")
    if frame.empty:
        raise FieldFormatError(f"{path}: trajectory has no rows.")
    indices = [int(v) for v in frame["step_index"]]
    if indices != list(range(indices[0], indices[0] + len(indices))):
        raise FieldFormatError(f"{path}: step_index values must be consecutive.")
    points = [mode.parse_vector(row) for row in frame[coords].itertuples(index=False)]
    return Trajectory(points, h, mode, start_index=indices[0])


def _jsonable(value, mode: ScalarMode):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v, mode) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, mode) for v in value]
    if hasattr(value, "value"):
        return value.value
    if mode.exact:
        return mode.format(value)
    return _jsonable(float(value), mode)


def check_entry(result: CheckResult, mode: ScalarMode) -> dict:
    return {
        "name": result.name,
        "status": result.status.value,
        "max_residual": _jsonable(result.max_residual, mode),
        "tolerance": _jsonable(result.tolerance, mode),
        "details": _jsonable(result.details, mode),
    }


def write_report(path: Path, payload: dict, mode: ScalarMode) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"schema": REPORT_SCHEMA, **_jsonable(payload, mode)}
    path.write_text(json.dumps(body, indent=2) + "\n")


def format_form(F: SymMultilinearForm, names: Iterable[str] | None = None) -> list[str]:
    """One block per output component: symmetric coefficient, multi-index and the expanded slot sum.

    Argument j is written ``aj`` and its i-th coordinate ``aj[i]``.
    """
    lines = [
        f"order {F.order}, dimension {F.dimension}, "
        f"{'scalar' if F.scalar_valued else 'vector'}-valued, {F.mode.value} mode"
    ]
    labels = list(names) if names is not None else [f"F[{c}]" for c in range(F.output_arity)]
    for label, terms in zip(labels, F.coefficients):
        for exps, coeff in terms:
            expansion = " + ".join(
                "*".join(f"a{slot + 1}[{var}]" for slot, var in enumerate(slots))
                for slots in slot_assignments(exps)
            )
            lines.append(f"{label}: {F.mode.format(coeff)} * [{', '.join(map(str, exps))}]  =  {F.mode.format(coeff)} * ({expansion})")
    return lines
