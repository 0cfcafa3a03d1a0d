"""
CLI command handler for parameter sweeps.
Varies one of k, T, β or the ensemble width and tabulates the results.
"""

import multiprocessing
import os
from typing import Any, Dict, List

import click
import pandas as pd

from cli.options import emit_distribution, run_options, with_run
from core.config import SWEEP_AXES, RunConfig
from core.errors import ConfigurationError, DomainError
from core.evaluation import distribution_for
from core.export import write_distribution_svg, write_table_csv
from core.observables import fit_line, mean_momentum, peak_positions, std_dev
from core.state import MomentumDistribution, Route


def _parse_values(axis: str, text: str) -> List[Any]:
    try:
        values = [part.strip() for part in text.split(",") if part.strip()]
        parsed = [int(v) for v in values] if axis == "steps" else [float(v) for v in values]
    except ValueError as e:
        raise ConfigurationError(f"invalid values for {axis}: {text!r}") from e
    if not parsed:
        raise ConfigurationError(f"no values given for {axis}")
    return parsed


def _sweep_point(job):
    run, route = job
    return distribution_for(run, route)


def _summary_row(axis: str, value: Any, dist: MomentumDistribution) -> Dict[str, Any]:
    row = {axis: value, "total": dist.total(), "mean": None, "std_dev": None}
    try:
        row["mean"] = mean_momentum(dist)
        row["std_dev"] = std_dev(dist)
    except DomainError:
        pass
    peaks = peak_positions(dist)
    row["peaks"] = " ".join(str(n) for n in peaks)
    row["outer_peak"] = max((abs(n) for n in peaks), default=0)
    return row


@click.command("sweep")
@run_options
@click.option("--axis", type=click.Choice(sorted(SWEEP_AXES)), required=True, help="Parameter to vary")
@click.option("--values", required=True, help='Comma-separated values, e.g. "4,8,12"')
@click.pass_context
@with_run("running sweep")
def cmd_sweep(ctx: click.Context, run: RunConfig, axis: str, values: str):
    """
    Run one route for every value of a parameter.

    Writes one distribution per value plus a summary table; sweeping
    steps over four or more values also fits std_dev against T.

    Examples:
        qw sweep --axis steps --values 4,8,12 --k 2
        qw sweep --axis steps --values 5,8,11,14,17,20 --k 0.5
        qw sweep --axis fwhm --values 0.005,0.01 --steps 15 --samples 1000
    """
    points = [run.with_parameter(axis, value) for value in _parse_values(axis, values)]
    route = run.route
    if route is Route.RESONANT and run.uses_ensemble:
        raise ConfigurationError("ensemble sweeps need the simulate or near-resonant route")

    click.echo(f"🔄 Sweeping {axis} over {len(points)} values on the {route.value} route...")
    jobs = [(point, route) for point in points]
    if run.workers > 1 and not run.uses_ensemble and len(jobs) > 1:
        with multiprocessing.Pool(min(run.workers, len(jobs))) as pool:
            dists = pool.map(_sweep_point, jobs)
    else:
        dists = [_sweep_point(job) for job in jobs]

    rows = []
    for point, dist in zip(points, dists):
        value = point.to_dict()[SWEEP_AXES[axis][0]][SWEEP_AXES[axis][1]]
        emit_distribution(point, dist)
        rows.append(_summary_row(axis, value, dist))
    summary = pd.DataFrame(rows)

    stem = f"sweep_{route.value}_{axis}"
    table = write_table_csv(summary, os.path.join(run.out, f"{stem}.csv"), provenance=run.to_dict())
    click.echo(f"📄 Summary saved to {table}")
    if run.plot:
        svg = write_distribution_svg(
            dists,
            os.path.join(run.out, f"{stem}.svg"),
            title=f"{route.value} sweep over {axis}",
            labels=[f"{axis} = {row[axis]:g}" for row in rows],
        )
        click.echo(f"📄 Plot saved to {svg}")

    click.echo("📊 Sweep summary:")
    click.echo(summary.to_string(index=False))

    if axis == "steps" and len(rows) >= 4 and all(row["std_dev"] is not None for row in rows):
        fit = fit_line([row["steps"] for row in rows], [row["std_dev"] for row in rows])
        click.echo(
            f"📊 Ballistic fit over T ∈ [{fit.steps_range[0]}, {fit.steps_range[1]}]: "
            f"σ ≈ {fit.slope:.4f}·T + {fit.intercept:.4f} (r² = {fit.r_squared:.4f})"
        )
    click.echo("✅ Sweep complete")
