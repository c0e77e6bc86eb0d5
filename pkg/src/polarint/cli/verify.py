from __future__ import annotations

from pathlib import Path
from typing import Annotated, Optional

import typer

from polarint.cli.common import EXIT_SINGULAR, EXIT_VERIFY_FAILED, exit_codes, parse_mode

app = typer.Typer()


@app.command(help="Verify k-integrals, measure, self-adjointness and scaling.")
def verify(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Run configuration (JSON)."),
    ],
    report: Annotated[
        Path,
        typer.Option("--report", "-r", help="JSON report to write."),
    ] = Path("report.json"),
    trajectory: Annotated[
        Optional[Path],
        typer.Option("--trajectory", "-t", help="Verify this trajectory CSV instead of integrating."),
    ] = None,
    seed: Annotated[
        int,
        typer.Option("--seed", help="Seed for the random scaling factors."),
    ] = 1,
    mode: Annotated[
        Optional[str],
        typer.Option("--mode", "-m", help="Override the configuration's scalar mode."),
    ] = None,
):
    """Run the geometric checks and write a JSON report."""
    from polarint.algebra import linalg
    from polarint.analysis.suite import run_checks
    from polarint.cli.config import load_config
    from polarint.cli.integrate import run_integration
    from polarint.cli.output import check_entry, read_trajectory, write_report

    with exit_codes():
        cfg = load_config(config, parse_mode(mode))
        if trajectory is not None:
            traj = read_trajectory(trajectory, cfg.mode, cfg.h)
        else:
            traj = run_integration(cfg)
        results = run_checks(
            cfg.system,
            traj,
            cfg.k,
            scaling=cfg.scaling,
            seed=seed,
            tolerances=cfg.tolerances,
            leapfrog_control=cfg.leapfrog_control,
        )
        write_report(
            report,
            {
                "mode": cfg.mode.value,
                "k": cfg.k,
                "h": cfg.mode.format(cfg.h),
                "points": len(traj),
                "seed": seed,
                "singular_at": traj.singular_at,
                "singularity": linalg.singularity_rule(cfg.mode),
                "checks": [check_entry(r, cfg.mode) for r in results],
            },
            cfg.mode,
        )

    for r in results:
        typer.echo(f"{r.name:32s} {r.status.value}")
    typer.echo(f"Report saved to: {report}")
    if traj.singular:
        typer.echo(f"Error: singular step at index {traj.singular_at}.", err=True)
        raise typer.Exit(code=EXIT_SINGULAR)
    if not all(r.passed for r in results):
        raise typer.Exit(code=EXIT_VERIFY_FAILED)
