from __future__ import annotations

from pathlib import Path
from typing import Annotated, Optional

import typer

from polarint.cli.common import EXIT_SINGULAR, exit_codes, parse_mode

app = typer.Typer()


def run_integration(config):
    """Starting window and trajectory of a loaded configuration."""
    from polarint.integrators.polarmap import integrate as integrate_map

    window = config.initial_window()
    return integrate_map(config.vector_field, window, config.steps)


@app.command(help="Integrate a configuration and write the trajectory.")
def integrate(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Run configuration (JSON)."),
    ],
    out: Annotated[
        Path,
        typer.Option("--out", "-o", help="Trajectory CSV to write."),
    ] = Path("trajectory.csv"),
    mode: Annotated[
        Optional[str],
        typer.Option("--mode", "-m", help="Override the configuration's scalar mode."),
    ] = None,
):
    """Iterate the polar map and write the trajectory as CSV."""
    from polarint.cli.config import load_config
    from polarint.cli.output import write_trajectory

    with exit_codes():
        cfg = load_config(config, parse_mode(mode))
        traj = run_integration(cfg)
        write_trajectory(traj, out)
    if traj.extension:
        typer.echo("Warning: degree > 2 suspension; the result is an extension of Kahan's map.", err=True)
    typer.echo(f"Trajectory ({len(traj)} points, k={cfg.k}) saved to: {out}")
    if traj.singular:
        typer.echo(
            f"Error: singular step at index {traj.singular_at}; the trajectory stops before it.",
            err=True,
        )
        raise typer.Exit(code=EXIT_SINGULAR)
