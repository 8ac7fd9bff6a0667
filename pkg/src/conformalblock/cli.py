"""Command-line interface."""

from __future__ import annotations

from collections.abc import Callable
import logging
from pathlib import Path
from typing import Any

import click

from conformalblock.algebra import Preset
from conformalblock.exceptions import ConformalError
from conformalblock.models import OutputFormat, RunConfig
from conformalblock.runner import VERIFY_ALL, Suite, VertexCheck, run
from conformalblock.spec_file import parse_coefficients

_LOGGER = logging.getLogger(__name__)

EXIT_CONFIGURATION_ERROR = 2


def _validate_coefficients(_ctx: click.Context, _param: click.Parameter, value: str) -> str:
    try:
        parse_coefficients(value)
    except ValueError as err:
        raise click.BadParameter(str(err)) from err
    return value


_OPTIONS: list[Callable[[Callable[..., Any]], Callable[..., Any]]] = [
    click.option(
        "--preset",
        type=click.Choice([preset.value for preset in Preset if preset is not Preset.CUSTOM]),
        default=Preset.BLOCK.value,
        show_default=True,
        help="Built-in algebra.",
    ),
    click.option(
        "--spec",
        "spec_path",
        type=click.Path(exists=True, dir_okay=False),
        help="Algebra spec file (TOML); overrides --preset.",
    ),
    click.option(
        "--module-spec",
        "module_spec_path",
        type=click.Path(exists=True, dir_okay=False),
        help="Module spec file (TOML); overrides --coeff.",
    ),
    click.option("-N", "--window", type=click.IntRange(min=0), default=3, show_default=True),
    click.option("-D", "--degree", type=click.IntRange(min=0), default=5, show_default=True),
    click.option("--q", "q", type=click.IntRange(min=0), default=2, show_default=True, help="Cochain degree."),
    click.option(
        "--coeff",
        "coefficients",
        default="trivial",
        show_default=True,
        callback=_validate_coefficients,
        help="trivial, c_a:a=<r|symbolic> or m:delta=<r|symbolic>,alpha=<r|symbolic>.",
    ),
    click.option("--max-index", type=click.IntRange(min=0), default=4, show_default=True),
    click.option("--reduced", is_flag=True, help="Use the reduced complex."),
    click.option(
        "--format",
        "output_format",
        type=click.Choice([output_format.value for output_format in OutputFormat]),
        default=OutputFormat.JSON.value,
        show_default=True,
    ),
    click.option("--stable", is_flag=True, help="Omit timings for byte-identical reports."),
    click.option("-o", "--output", "output_path", type=click.Path(dir_okay=False), help="Write the report here."),
    click.option("-v", "--verbose", is_flag=True, help="Log solver sizes."),
]


def run_options(function: Callable[..., Any]) -> Callable[..., Any]:
    """Attach the options shared by every command."""
    for option in reversed(_OPTIONS):
        function = option(function)
    return function


def _execute(ctx: click.Context, command: str, **options: Any) -> None:
    config = RunConfig(
        command=command,
        output_format=OutputFormat(options.pop("output_format")),
        **options,
    )
    if config.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    _LOGGER.debug("Run configuration: %s", config.to_dict())
    try:
        report = run(config)
    except ConformalError as err:
        click.echo(f"Error: {err}", err=True)
        ctx.exit(EXIT_CONFIGURATION_ERROR)
    text = report.render_json() if config.output_format is OutputFormat.JSON else report.render_text()
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8", newline="\n")
    else:
        click.echo(text, nl=False)
    ctx.exit(report.exit_code)


@click.group()
@click.version_option(package_name="conformalblock")
def cli() -> None:
    """Verify the Block type Lie conformal algebra on truncation windows."""


@cli.command()
@run_options
@click.pass_context
def axioms(ctx: click.Context, **options: Any) -> None:
    """Check skew-symmetry and the Jacobi identity."""
    _execute(ctx, Suite.AXIOMS, **options)


@cli.command()
@run_options
@click.pass_context
def derivations(ctx: click.Context, **options: Any) -> None:
    """Compare window derivations with inner derivations."""
    _execute(ctx, Suite.DERIVATIONS, **options)


@cli.command()
@run_options
@click.pass_context
def modules(ctx: click.Context, **options: Any) -> None:
    """Check module axioms and classify rank one modules."""
    _execute(ctx, Suite.MODULES, **options)


@cli.command()
@run_options
@click.pass_context
def cohomology(ctx: click.Context, **options: Any) -> None:
    """Compute truncated cohomology dimensions."""
    _execute(ctx, Suite.COHOMOLOGY, **options)


@cli.command()
@run_options
@click.option("--check", type=click.Choice([check.value for check in VertexCheck]), help="Run a single check.")
@click.pass_context
def vertex(ctx: click.Context, **options: Any) -> None:
    """Check the vertex Lie and vertex Poisson structures."""
    _execute(ctx, Suite.VERTEX, **options)


@cli.command(VERIFY_ALL)
@run_options
@click.pass_context
def verify_all(ctx: click.Context, **options: Any) -> None:
    """Run every suite."""
    _execute(ctx, VERIFY_ALL, **options)


def main() -> None:
    """Run the command-line interface."""
    cli()
