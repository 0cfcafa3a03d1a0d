#!/usr/bin/env python3
"""
qw - quantum walks of kicked two-level atoms.

Simulates the walk with the exact quantum map, evaluates the resonant and
near-resonant formulas, averages over quasimomentum ensembles and compares
the routes against each other.
"""

import logging
import os
import sys

import click

# Add the project root to Python path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.analytic import cmd_analytic  # noqa: E402
from cli.compare import cmd_compare  # noqa: E402
from cli.simulate import cmd_simulate  # noqa: E402
from cli.sweep import cmd_sweep  # noqa: E402
from cli.verify import cmd_verify  # noqa: E402


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress and numerical diagnostics")
@click.pass_context
def cli(ctx: click.Context, verbose: bool):
    """Kicked-atom quantum walk toolkit."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose


cli.add_command(cmd_simulate)
cli.add_command(cmd_analytic)
cli.add_command(cmd_compare)
cli.add_command(cmd_sweep)
cli.add_command(cmd_verify)


if __name__ == "__main__":
    cli()
