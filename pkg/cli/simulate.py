"""
CLI command handler for direct simulation of the kicked walk.
Runs the exact quantum map, optionally averaged over a quasimomentum ensemble.
"""

import click

from cli.options import emit_distribution, run_options, summarize, with_run
from core.config import RunConfig
from core.evaluation import distribution_for
from core.state import Route


@click.command("simulate")
@run_options
@click.pass_context
@with_run("simulating walk")
def cmd_simulate(ctx: click.Context, run: RunConfig):
    """
    Simulate the walk with the exact quantum map.

    With --fwhm > 0 the distribution is averaged over a Gaussian
    quasimomentum ensemble of --samples draws.

    Examples:
        qw simulate --k 2 --steps 10                 # resonant walk
        qw simulate --k 2 --steps 15 --fwhm 0.01     # ensemble average
        qw simulate --ratchet 0,1 --plot             # two-class ratchet with SVG
    """
    walk = run.walk
    if run.uses_ensemble:
        click.echo(f"🔄 Simulating k={walk.kick_strength:g}, T={walk.steps} over {run.n_samples} β samples...")
    else:
        click.echo(f"🔄 Simulating k={walk.kick_strength:g}, T={walk.steps}, β={walk.quasimomentum:g}...")

    dist = distribution_for(run, Route.SIMULATION)
    click.echo(f"📊 {summarize(dist)}")
    emit_distribution(run, dist)
    click.echo("✅ Simulation complete")
