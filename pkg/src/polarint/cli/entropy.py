from __future__ import annotations

from pathlib import Path
from typing import Annotated, Optional

import typer

from polarint.cli.common import EXIT_USAGE, exit_codes, parse_mode
from polarint.errors import ConfigError

app = typer.Typer()


@app.command(help="Classify the height growth of exact iterates.")
def entropy(
    config: Annotated[
        Path,
        typer.Option("--config", "-c", help="Run configuration (JSON, rational mode)."),
    ],
    report: Annotated[
        Path,
        typer.Option("--report", "-r", help="JSON report to write."),
    ] = Path("entropy.json"),
    iters: Annotated[
        int,
        typer.Option("--iters", "-n", help="Number of exact iterates."),
    ] = 14,
    mode: Annotated[
        Optional[str],
        typer.Option("--mode", "-m", help="Override the configuration's scalar mode."),
    ] = None,
):
    """Estimate height growth of exact iterates and classify it."""
    from polarint.analysis.entropy import height_growth
    from polarint.cli.config import load_config
    from polarint.cli.output import write_report

    with exit_codes():
        cfg = load_config(config, parse_mode(mode))
        if not cfg.mode.exact:
            typer.echo("Error: height growth needs exact iterates; use rational mode.", err=True)
            raise typer.Exit(code=EXIT_USAGE)
        if iters < 1:
            raise ConfigError(f"--iters must be at least 1, got {iters}.")
        estimate = height_growth(cfg.system, cfg.initial_window(), iters)
        write_report(
            report,
            {
                "mode": cfg.mode.value,
                "k": cfg.k,
                "iters": iters,
                "heights": list(estimate.heights),
                "growth_ratios": list(estimate.growth_ratios),
                "classification": estimate.classification.value,
                "mean_ratio": estimate.mean_ratio,
                "growth_degree": estimate.growth_degree,
                "degree_trend": estimate.degree_trend,
                "quadratic_fit_r2": estimate.quadratic_fit_r2,
                "insufficient": estimate.insufficient,
                "singular_at": estimate.singular_at,
                "stopped_at_height": estimate.stopped_at_height,
                "thresholds": estimate.thresholds,
            },
            cfg.mode,
        )
    if estimate.insufficient:
        typer.echo("Warning: too few iterates for a reliable classification.", err=True)
    typer.echo(f"Classification: {estimate.classification.value}")
    typer.echo(f"Report saved to: {report}")
