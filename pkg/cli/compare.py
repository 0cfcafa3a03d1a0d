"""
CLI command handler for cross-route comparisons.
Runs two routes on one configuration and judges their distance.
"""

import os

import click

from cli.options import ROUTE_CHOICE, emit_distribution, run_options, with_run
from core.config import RunConfig
from core.errors import ComparisonFailure
from core.evaluation import ComparisonPipeline
from core.export import write_distribution_svg, write_report_json


@click.command("compare")
@run_options
@click.option("--against", type=ROUTE_CHOICE, help="Second route (default: simulate)")
@click.pass_context
@with_run("comparing routes")
def cmd_compare(ctx: click.Context, run: RunConfig):
    """
    Compare two routes and report max-norm and L1 distances.

    Exits with code 4 when the distance exceeds --tolerance.

    Examples:
        qw compare --route resonant --k 2 --steps 10
        qw compare --route near-resonant --beta 1e-4 --steps 5 --tolerance 1e-2
        qw compare --route near-resonant --fwhm 0.005 --steps 10 --exclude-initial --tolerance 0.05
    """
    pipeline = ComparisonPipeline()
    first, second = pipeline.routes_of(run)
    click.echo(f"🔄 Comparing {first.value} against {second.value}...")
    report = pipeline.compare(run)

    for dist in report.distributions:
        emit_distribution(run, dist)
    stem = f"compare_{first.value}_vs_{second.value}_k{run.walk.kick_strength:g}_T{run.walk.steps}"
    report_path = write_report_json(report.to_dict(), os.path.join(run.out, f"{stem}.json"))
    click.echo(f"📄 Report saved to {report_path}")
    if run.plot:
        svg = write_distribution_svg(
            list(report.distributions),
            os.path.join(run.out, f"{stem}.svg"),
            title=f"k = {run.walk.kick_strength:g}, T = {run.walk.steps}",
        )
        click.echo(f"📄 Plot saved to {svg}")

    click.echo("📊 Comparison summary:")
    click.echo(f"   max-norm:          {report.max_norm:.3e} (worst n = {report.worst_n})")
    click.echo(f"   L1:                {report.l1:.3e}")
    click.echo(f"   max-norm excl. {report.excluded_classes}: {report.max_norm_excluded:.3e}")
    click.echo(f"   L1 excl. {report.excluded_classes}:       {report.l1_excluded:.3e}")
    for n, deviation in report.initial_deviation.items():
        click.echo(f"   |ΔP({n})| = {deviation:.3e}")

    if not report.passed:
        measured = report.max_norm_excluded if report.exclude_initial else report.max_norm
        raise ComparisonFailure(f"{measured:.3e} exceeds tolerance {report.tolerance:.3e}")
    click.echo(f"✅ Pass (tolerance {report.tolerance:.1e})")
