"""
CLI command handler for the analytic routes.
Evaluates the resonant (Dickson) or near-resonant (path-sum) formula.
"""

import click

from cli.options import emit_distribution, run_options, summarize, with_run
from core.config import RunConfig
from core.evaluation import distribution_for
from core.near_resonant import TOTAL_PROBABILITY_TOLERANCE
from core.state import Route


def analytic_route(run: RunConfig) -> Route:
    """The requested analytic route, or the natural one for the walk's β."""
    if run.route is not Route.SIMULATION:
        return run.route
    if run.walk.is_resonant and not run.uses_ensemble:
        return Route.RESONANT
    return Route.NEAR_RESONANT


@click.command("analytic")
@run_options
@click.pass_context
@with_run("evaluating analytic distribution")
def cmd_analytic(ctx: click.Context, run: RunConfig):
    """
    Evaluate the closed-form momentum distribution.

    Without --route the resonant formula is used at β = 0 and the
    near-resonant path sum otherwise.

    Examples:
        qw analytic --k 2 --steps 10                          # Dickson route
        qw analytic --route near-resonant --beta 1e-4 --steps 5
        qw analytic --route near-resonant --fwhm 0.005 --steps 15 --samples 500
    """
    route = analytic_route(run)
    walk = run.walk
    click.echo(f"🔄 Evaluating {route.value} route at k={walk.kick_strength:g}, T={walk.steps}...")
    dist = distribution_for(run, route)
    click.echo(f"📊 {summarize(dist)}")
    if abs(dist.total() - 1.0) > TOTAL_PROBABILITY_TOLERANCE:
        click.echo(f"⚠️  ΣP = {dist.total():.6g}: the path sum is outside its range of validity here")
    emit_distribution(run, dist)
    click.echo("✅ Analytic evaluation complete")
