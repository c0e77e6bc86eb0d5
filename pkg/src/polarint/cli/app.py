import typer

from polarint.cli.common import configure_logging
from polarint.cli.entropy import app as entropy_app
from polarint.cli.integrate import app as integrate_app
from polarint.cli.polarize import app as polarize_app
from polarint.cli.verify import app as verify_app

app = typer.Typer(
    name="polarint",
    help="polarint: polar-map discretization of polynomial vector fields and its geometric checks.",
    no_args_is_help=True,
)


@app.callback()
def _setup():
    configure_logging()


# Unnamed sub-apps merge their commands into this one.
app.add_typer(polarize_app)
app.add_typer(integrate_app)
app.add_typer(verify_app)
app.add_typer(entropy_app)


def main():
    app()
