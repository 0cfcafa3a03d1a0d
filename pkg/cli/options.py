"""
Options shared by every run command and the mapping from flags to RunConfig.
"""

import functools
import os
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, Optional

import click

from core.config import DEFAULT_CONFIG_PATH, RunConfig, load_run_config
from core.errors import DomainError, WalkError
from core.export import output_name, write_distribution_csv, write_distribution_svg
from core.observables import mean_momentum, peak_positions, std_dev
from core.state import MomentumDistribution, Route, parse_classes, parse_weights

ROUTE_CHOICE = click.Choice([route.value for route in Route])

# command-specific flags passed through to the command body
_EXTRA_KEYS = {"axis", "values"}

_RUN_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False),
                 help=f"JSON run configuration (default: {DEFAULT_CONFIG_PATH} if present)"),
    click.option("--route", type=ROUTE_CHOICE, help="Computation route"),
    click.option("--k", "kick_strength", type=float, help="Kick strength k"),
    click.option("--steps", type=int, help="Number of walk steps T"),
    click.option("--beta", type=float, help="Quasimomentum β"),
    click.option("--period", type=float, help="Kick period τ (default 4π)"),
    click.option("--cutoff", type=int, help="Momentum cutoff N_max"),
    click.option("--free-mode", type=click.Choice(["simplified", "full"]), help="Free evolution between kicks"),
    click.option("--ratchet", type=str, help='Initial momentum classes, e.g. "0,1"'),
    click.option("--weights", type=str, help='Initial level weights "b1,b2"'),
    click.option("--ladder-phase", type=float, help="Phase φ of the e^{isφ} ladder"),
    click.option("--fwhm", type=float, help="Quasimomentum ensemble FWHM (0 = single β)"),
    click.option("--samples", type=int, help="Ensemble size"),
    click.option("--seed", type=int, help="Ensemble seed"),
    click.option("--workers", type=int, help="Worker processes for ensembles and sweeps"),
    click.option("--out", type=click.Path(file_okay=False), help="Output directory"),
    click.option("--plot/--no-plot", default=None, help="Also write SVG plots"),
    click.option("--tolerance", type=float, help="Comparison tolerance (max-norm)"),
    click.option("--exclude-initial/--include-initial", default=None,
                 help="Judge comparisons with n ∈ {0, 1} and the initial classes excluded"),
]


def run_options(func: Callable) -> Callable:
    """Attach the shared run options to a click command."""
    for option in reversed(_RUN_OPTIONS):
        func = option(func)
    return func


def resolve_run(config_path: Optional[str], **flags: Any) -> RunConfig:
    """Merge config file and flags (flags win) into a validated RunConfig."""
    overrides: Dict[str, Dict[str, Any]] = {
        "walk": {
            "kick_strength": flags.get("kick_strength"),
            "steps": flags.get("steps"),
            "quasimomentum": flags.get("beta"),
            "kick_period": flags.get("period"),
            "momentum_cutoff": flags.get("cutoff"),
            "free_evolution_mode": flags.get("free_mode"),
        },
        "ratchet": {
            "classes": list(parse_classes(flags["ratchet"])) if flags.get("ratchet") else None,
            "level_weights": list(parse_weights(flags["weights"])) if flags.get("weights") else None,
            "ladder_phase": flags.get("ladder_phase"),
        },
        "ensemble": {
            "fwhm": flags.get("fwhm"),
            "n_samples": flags.get("samples"),
            "seed": flags.get("seed"),
        },
        "run": {
            "route": flags.get("route"),
            "against": flags.get("against"),
            "out": flags.get("out"),
            "plot": flags.get("plot"),
            "tolerance": flags.get("tolerance"),
            "exclude_initial": flags.get("exclude_initial"),
            "workers": flags.get("workers"),
        },
    }
    if config_path is None:
        return load_run_config(DEFAULT_CONFIG_PATH, overrides)
    return load_run_config(config_path, overrides, must_exist=True)


@contextmanager
def reported_errors(ctx: click.Context, action: str) -> Iterator[None]:
    """Turn library errors into a ❌ line and the error's exit code."""
    try:
        yield
    except WalkError as e:
        click.echo(f"❌ Error {action}: {e}", err=True)
        ctx.exit(e.exit_code)


def with_run(action: str) -> Callable:
    """
    Resolve the RunConfig from the shared options and pass it as ``run``.

    Errors raised while resolving or running are reported the same way.
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(ctx: click.Context, config_path: Optional[str], **flags: Any):
            with reported_errors(ctx, action):
                run = resolve_run(config_path, **flags)
                return func(ctx, run, **{key: flags[key] for key in flags if key in _EXTRA_KEYS})
        return wrapper
    return decorator


def summarize(dist: MomentumDistribution) -> str:
    """One status line with total probability, mean, width and peaks."""
    parts = [f"ΣP = {dist.total():.12f}"]
    try:
        parts.append(f"⟨p⟩ = {mean_momentum(dist):+.6f}")
        parts.append(f"σ = {std_dev(dist):.6f}")
    except DomainError:
        pass
    peaks = peak_positions(dist)
    if peaks:
        parts.append(f"peaks at n = {peaks}")
    return ", ".join(parts)


def emit_distribution(run: RunConfig, dist: MomentumDistribution, label: Optional[str] = None) -> str:
    """Write the distribution CSV (and SVG with --plot); return the CSV path."""
    fwhm = run.fwhm if dist.route is not Route.RESONANT else 0.0
    path = os.path.join(run.out, output_name(dist, "csv", fwhm=fwhm))
    write_distribution_csv(dist, path, provenance=run.to_dict())
    click.echo(f"📄 {label or dist.route.value} distribution saved to {path}")
    if run.plot:
        svg = os.path.join(run.out, output_name(dist, "svg", fwhm=fwhm))
        title = f"{dist.route.value}: k = {dist.config.kick_strength:g}, T = {dist.config.steps}"
        write_distribution_svg([dist], svg, title=title)
        click.echo(f"📄 Plot saved to {svg}")
    return path
