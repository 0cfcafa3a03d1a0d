"""
Gaussian quasimomentum ensembles.

A condensate is a mixture of subensembles with different β; its momentum
distribution is the plain (incoherent) average of the per-β distributions.
Samples come from numpy's PCG64 bit generator and its ziggurat
``standard_normal`` transform, so a seed fixes the result everywhere.
"""

from __future__ import annotations

import logging
import math
import multiprocessing
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from core.errors import ConfigurationError
from core.near_resonant import VALIDITY_LIMIT, check_total_probability
from core.routes import compute_distribution
from core.state import MomentumDistribution, RatchetSpec, Route, WalkConfig

logger = logging.getLogger(__name__)

__all__ = [
    "FWHM_PER_SIGMA",
    "DEFAULT_SAMPLES",
    "PRNG_NAME",
    "EnsembleSpec",
    "sample_betas",
    "pairwise_sum",
    "averaged_distribution",
]

FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
DEFAULT_SAMPLES = 10_000
PRNG_NAME = "numpy PCG64 / ziggurat standard_normal"


@dataclass(frozen=True)
class EnsembleSpec:
    """Width, sample count, seed and per-β engine of a quasimomentum ensemble."""

    fwhm: float = 0.0
    n_samples: int = DEFAULT_SAMPLES
    seed: int = 0
    route: Route = Route.SIMULATION

    def __post_init__(self):
        if not self.fwhm >= 0:
            raise ConfigurationError(f"fwhm must be non-negative, got {self.fwhm}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ConfigurationError(f"n_samples must be a positive integer, got {self.n_samples}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        route = Route(self.route)
        if route is Route.RESONANT:
            raise ConfigurationError("the resonant route has no β dependence; use simulate or near-resonant")
        object.__setattr__(self, "route", route)
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "fwhm", float(self.fwhm))

    @property
    def sigma(self) -> float:
        return self.fwhm / FWHM_PER_SIGMA

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fwhm": self.fwhm,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "route": self.route.value,
        }


def sample_betas(spec: EnsembleSpec) -> NDArray[np.float64]:
    """β samples with mean 0 and standard deviation fwhm / (2√(2 ln 2))."""
    if spec.fwhm == 0:
        return np.zeros(spec.n_samples)
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return spec.sigma * rng.standard_normal(spec.n_samples)


def pairwise_sum(arrays: Sequence[NDArray[np.float64]]) -> NDArray[np.float64]:
    """Sum arrays along a fixed balanced tree, independent of how they were produced."""
    if not arrays:
        raise ConfigurationError("nothing to sum")
    level: List[NDArray[np.float64]] = list(arrays)
    while len(level) > 1:
        paired = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return level[0]


def _run_sample(task: Tuple[WalkConfig, RatchetSpec, Route]) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    config, ratchet, route = task
    dist = compute_distribution(config, ratchet, route, check_validity=False)
    return np.array(dist.p1), np.array(dist.p2)


def averaged_distribution(
    config: WalkConfig,
    ratchet: RatchetSpec,
    spec: EnsembleSpec,
    workers: int = 1,
) -> MomentumDistribution:
    """
    Incoherent average of the per-β distributions of a Gaussian ensemble.

    Args:
        config: Walk parameters; its quasimomentum is replaced by each sample
        ratchet: Initial state definition
        spec: Ensemble width, size, seed and engine
        workers: Worker processes for the per-β map (1 runs in-process)

    Returns:
        Averaged MomentumDistribution tagged with the engine's route
    """
    if spec.route is Route.NEAR_RESONANT and spec.fwhm * config.steps > VALIDITY_LIMIT:
        logger.warning(
            "β_FWHM·T = %.3f exceeds %.2f; the path-sum approximation is unreliable",
            spec.fwhm * config.steps,
            VALIDITY_LIMIT,
        )

    base = config.with_changes(momentum_cutoff=config.cutoff_for(ratchet))
    if spec.fwhm == 0:
        p1, p2 = _run_sample((base.with_changes(quasimomentum=0.0), ratchet, spec.route))
    else:
        betas = sample_betas(spec)
        tasks = [(base.with_changes(quasimomentum=float(beta)), ratchet, spec.route) for beta in betas]
        logger.info("averaging %d %s walks over fwhm %.4g", len(tasks), spec.route.value, spec.fwhm)
        if workers > 1:
            with multiprocessing.Pool(workers) as pool:
                results = pool.map(_run_sample, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
        else:
            results = [_run_sample(task) for task in tasks]
        p1 = pairwise_sum([r[0] for r in results]) / len(results)
        p2 = pairwise_sum([r[1] for r in results]) / len(results)

    cutoff = base.momentum_cutoff
    total = float(np.sum(p1) + np.sum(p2))
    dist = MomentumDistribution(
        grid=np.arange(-cutoff, cutoff + 1),
        p1=p1,
        p2=p2,
        route=spec.route,
        config=config,
        ratchet=ratchet,
        provenance={"ensemble": spec.to_dict(), "prng": PRNG_NAME, "total_probability": total},
    )
    if spec.route is Route.SIMULATION:
        dist.check_normalized()
    elif spec.fwhm > 0:
        check_total_probability(total, f"fwhm = {spec.fwhm:g}, T = {config.steps}")
    return dist
