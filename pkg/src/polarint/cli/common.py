from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from typing import Iterator, Optional

import typer

from polarint.algebra.scalar import ScalarMode
from polarint.errors import ConfigError, PolarintError, SingularStepError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SINGULAR = 2
EXIT_VERIFY_FAILED = 3

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def configure_logging() -> None:
    """Install one stderr handler at the level named by POLARINT_LOG (default: error)."""
    name = os.environ.get("POLARINT_LOG", "error").strip().lower()
    if name not in LOG_LEVELS:
        typer.echo(
            f"Error: POLARINT_LOG={name!r} is not a log level. Use one of: {', '.join(LOG_LEVELS)}.",
            err=True,
        )
        raise typer.Exit(code=EXIT_USAGE)
    root = logging.getLogger("polarint")
    root.setLevel(LOG_LEVELS[name])
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)


def parse_mode(value: Optional[str]) -> Optional[ScalarMode]:
    """``--mode`` value; call inside ``exit_codes`` so a bad name exits with 1."""
    if value is None:
        return None
    try:
        return ScalarMode.parse(value)
    except PolarintError as exc:
        raise ConfigError(f"--mode: {exc}") from None


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map library errors to exit codes: singular steps to 2, everything else to 1."""
    try:
        yield
    except SingularStepError as exc:
        typer.echo(f"Error: singular step: {exc}", err=True)
        raise typer.Exit(code=EXIT_SINGULAR) from None
    except (PolarintError, OSError) as exc:
        typer.echo(f"Error: {exc}", err=True)
        raise typer.Exit(code=EXIT_USAGE) from None
