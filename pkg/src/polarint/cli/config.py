"""Run configuration files.

A configuration is a JSON object::

    {
      "mode": "rational",
      "hamiltonian": {"dimension": 2, "monomials": [...], "K": [[0, 1], [-1, 0]]},
      "h": "1/10",
      "steps": 200,
      "window": [["1", "0"], ["1", "1/2"]]
    }

with exactly one of ``field`` / ``hamiltonian`` (inline, or a path relative
to the configuration file) and either ``window`` or ``x_init`` plus
``bootstrap``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from polarint.algebra.polyfield import PolyVectorField, parse_field
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.errors import ConfigError, PolarintError
from polarint.hamiltonian.spec import HamiltonianSpec, parse_hamiltonian
from polarint.integrators.bootstrap import bootstrap
from polarint.integrators.window import BootstrapConfig, BootstrapMethod, PolarWindow

logger = logging.getLogger(__name__)

System = Union[PolyVectorField, HamiltonianSpec]

KNOWN_KEYS = {
    "mode",
    "field",
    "hamiltonian",
    "h",
    "steps",
    "window",
    "x_init",
    "bootstrap",
    "leapfrog_control",
    "tolerances",
    "scaling",
}


@dataclass(frozen=True, eq=False)
class RunConfig:
    mode: ScalarMode
    system: System
    h: Scalar
    steps: int
    k: int
    window: tuple | None = None
    x_init: tuple | None = None
    bootstrap: BootstrapConfig = field(default_factory=BootstrapConfig)
    leapfrog_control: bool = False
    tolerances: dict = field(default_factory=dict)
    scaling: tuple | None = None
    source: Path | None = None

    @property
    def is_hamiltonian(self) -> bool:
        return isinstance(self.system, HamiltonianSpec)

    @property
    def vector_field(self) -> PolyVectorField:
        return self.system.field if self.is_hamiltonian else self.system

    @property
    def dimension(self) -> int:
        return self.system.dimension

    def initial_window(self) -> PolarWindow:
        if self.window is not None:
            return PolarWindow.build(self.window, self.h, self.mode)
        return bootstrap(self.vector_field, self.x_init, self.bootstrap, h=self.h, k=self.k, provided=None)


def _resolve(value, base: Path | None, key: str):
    """Inline object, or a path to a JSON file (relative to the configuration)."""
    if isinstance(value, Mapping):
        return value
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = base / path
        if not path.is_file():
            raise ConfigError(f"'{key}' names a file that does not exist: {path}")
        return path
    raise ConfigError(f"'{key}' must be an object or a path to a JSON file, got {type(value).__name__}.")


def _step_count(system: System, window_len: int | None) -> int:
    """k from the degree: field degree - 1 (suspensions use max(degree, 2) - 1), Hamiltonian degree - 2."""
    if isinstance(system, HamiltonianSpec):
        if system.k is None:
            if window_len is None:
                raise ConfigError("A zero Hamiltonian needs 'degree' or an explicit 'window' to fix k.")
            return window_len
        return system.k
    degree = system.degree
    if degree is None:
        if window_len is None:
            raise ConfigError("A zero field needs an explicit 'window' to fix k.")
        return window_len
    if system.is_homogeneous and degree >= 2:
        return degree - 1
    return max(degree, 2) - 1


def _points(raw, mode: ScalarMode, key: str) -> tuple:
    if not isinstance(raw, list) or not all(isinstance(p, list) for p in raw):
        raise ConfigError(f"'{key}' must be a list of points (lists of numbers).")
    return tuple(tuple(mode.coerce(v) for v in p) for p in raw)


def parse_config(data: Mapping, mode: ScalarMode | str | None = None, base: Path | None = None) -> RunConfig:
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}.\nKnown keys: {sorted(KNOWN_KEYS)}.")
    try:
        mode = ScalarMode.parse(mode if mode is not None else data.get("mode", "double"))
    except PolarintError as exc:
        raise ConfigError(str(exc)) from None

    if ("field" in data) == ("hamiltonian" in data):
        raise ConfigError(
            "Exactly one system is required. Either:\n"
            "  - set 'field' to a polynomial vector field, or\n"
            "  - set 'hamiltonian' to a Hamiltonian with structure matrix K."
        )
    if "field" in data:
        system: System = parse_field(_resolve(data["field"], base, "field"), mode)
    else:
        system = parse_hamiltonian(_resolve(data["hamiltonian"], base, "hamiltonian"), mode)

    if "h" not in data:
        raise ConfigError("'h' (step size) is required.")
    h = mode.coerce(data["h"])
    if h == 0:
        raise ConfigError("'h' must be nonzero.")
    steps = data.get("steps", 0)
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 0:
        raise ConfigError(f"'steps' must be a non-negative integer, got {steps!r}.")

    window = _points(data["window"], mode, "window") if "window" in data else None
    k = _step_count(system, len(window) if window is not None else None)
    n = system.dimension
    if window is not None:
        if len(window) != k:
            degree = system.degree if system.degree is not None else "unknown"
            raise ConfigError(
                f"'window' has {len(window)} point(s) but the system's degree {degree} needs k = {k}."
            )
        if any(len(p) != n for p in window):
            raise ConfigError(f"Every window point needs {n} coordinates.")
        x_init = None
        boot = BootstrapConfig()
    else:
        if "x_init" not in data:
            raise ConfigError(
                "No starting state. Either:\n"
                "  - give 'window' with the k starting points, or\n"
                "  - give 'x_init' (and optionally 'bootstrap') to build them."
            )
        (x_init,) = _points([data["x_init"]], mode, "x_init")
        if len(x_init) != n:
            raise ConfigError(f"'x_init' needs {n} coordinates, got {len(x_init)}.")
        raw_boot = data.get("bootstrap", {})
        if not isinstance(raw_boot, Mapping):
            raise ConfigError("'bootstrap' must be an object {method, substeps}.")
        try:
            boot = BootstrapConfig(
                BootstrapMethod(raw_boot.get("method", BootstrapMethod.REFERENCE_ONE_STEP.value)),
                raw_boot.get("substeps", 100),
            )
        except ValueError as exc:
            raise ConfigError(f"Invalid 'bootstrap': {exc}") from None
        if boot.method is BootstrapMethod.EXACT_PROVIDED:
            raise ConfigError("Bootstrap method 'exact-provided' takes its points from 'window'.")

    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, Mapping):
        raise ConfigError("'tolerances' must map check names to numbers.")
    tolerances = {str(name): mode.coerce(v) for name, v in tolerances.items()}

    scaling = None
    if "scaling" in data:
        if not isinstance(data["scaling"], list) or len(data["scaling"]) != k:
            raise ConfigError(f"'scaling' must list k = {k} factors.")
        scaling = tuple(mode.coerce(v) for v in data["scaling"])

    leapfrog = data.get("leapfrog_control", False)
    if not isinstance(leapfrog, bool):
        raise ConfigError("'leapfrog_control' must be true or false.")

    logger.info("config: mode=%s k=%d n=%d steps=%d", mode.value, k, n, steps)
    return RunConfig(mode, system, h, steps, k, window, x_init, boot, leapfrog, tolerances, scaling, base)


def load_config(path: Path, mode: ScalarMode | str | None = None) -> RunConfig:
    """Read a configuration file; ``mode`` overrides the file's ``mode``."""
    if not path.is_file():
        raise ConfigError(f"Configuration file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path} must contain a JSON object.")
    return parse_config(data, mode, path.parent)
