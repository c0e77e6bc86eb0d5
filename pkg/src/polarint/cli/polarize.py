from __future__ import annotations

from pathlib import Path
from typing import Annotated, Optional

import typer

from polarint.cli.common import EXIT_USAGE, exit_codes, parse_mode

app = typer.Typer()


@app.command(help="Print the polarization of a homogeneous field.")
def polarize(
    field_file: Annotated[
        Path,
        typer.Argument(help="Field description (JSON: dimension, components)."),
    ],
    mode: Annotated[
        Optional[str],
        typer.Option("--mode", "-m", help="Scalar mode: double or rational."),
    ] = "rational",
    homogenize: Annotated[
        bool,
        typer.Option("--homogenize", help="Suspend a nonhomogeneous field to R^(n+1) first."),
    ] = False,
):
    """Print the symmetric multilinear form of a homogeneous field."""
    from polarint.algebra.polarize import polarize as polarize_field
    from polarint.algebra.polyfield import homogenize as homogenize_field
    from polarint.algebra.polyfield import parse_field
    from polarint.cli.output import format_form

    with exit_codes():
        f = parse_field(field_file, parse_mode(mode))
        if not f.is_homogeneous:
            if not homogenize:
                degrees = sorted({m.degree for m in f.monomials})
                typer.echo(
                    f"Error: field has monomials of degrees {degrees} and cannot be polarized.\n"
                    "Hint: pass --homogenize to polarize its suspension in one dimension higher.",
                    err=True,
                )
                raise typer.Exit(code=EXIT_USAGE)
            f = homogenize_field(f)
        if f.is_zero:
            typer.echo(f"zero field, dimension {f.dimension}: no coefficients")
            return
        for line in format_form(polarize_field(f)):
            typer.echo(line)
