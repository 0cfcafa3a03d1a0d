"""
Scalar diagnostics of momentum distributions and cross-route distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy.signal import find_peaks

from core.errors import ConfigurationError, DomainError
from core.routes import compute_distribution
from core.state import MomentumDistribution, RatchetSpec, Route, WalkConfig

__all__ = [
    "NORMALIZATION_TOLERANCE",
    "PEAK_PROMINENCE",
    "BallisticFit",
    "mean_momentum",
    "std_dev",
    "peak_positions",
    "l1_distance",
    "max_deviation",
    "deviation_profile",
    "pad_to",
    "fit_line",
    "ballistic_fit",
]

NORMALIZATION_TOLERANCE = 1e-8
PEAK_PROMINENCE = 0.5


@dataclass(frozen=True)
class BallisticFit:
    """Least-squares line std_dev(T) = slope·T + intercept."""

    slope: float
    intercept: float
    r_squared: float
    steps_range: Tuple[int, int]

    def to_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "steps_range": list(self.steps_range),
        }


def _normalized(dist: MomentumDistribution) -> NDArray[np.float64]:
    total = dist.total()
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise DomainError(f"distribution is not normalized (ΣP = {total:.12f})")
    return dist.p


def mean_momentum(dist: MomentumDistribution) -> float:
    """Σ n·P(n) over the integer classes."""
    return float(dist.grid @ _normalized(dist))


def std_dev(dist: MomentumDistribution) -> float:
    p = _normalized(dist)
    mean = float(dist.grid @ p)
    return float(np.sqrt(((dist.grid - mean) ** 2) @ p))


def peak_positions(dist: MomentumDistribution, prominence: float = PEAK_PROMINENCE) -> List[int]:
    """Local maxima with P(n) >= prominence·max P."""
    p = np.asarray(dist.p)
    if p.max() <= 0:
        return []
    indices, _ = find_peaks(p, height=prominence * p.max())
    return [int(n) for n in dist.grid[indices]]


def _aligned(a: MomentumDistribution, b: MomentumDistribution) -> None:
    if not np.array_equal(a.grid, b.grid):
        raise DomainError(
            f"grids differ: [{a.grid[0]}, {a.grid[-1]}] vs [{b.grid[0]}, {b.grid[-1]}]"
        )


def _kept(grid: NDArray[np.int64], exclude: Iterable[int]) -> NDArray[np.bool_]:
    return ~np.isin(grid, list(exclude))


def deviation_profile(a: MomentumDistribution, b: MomentumDistribution) -> NDArray[np.float64]:
    """|P_a(n) - P_b(n)| for every n of the shared grid."""
    _aligned(a, b)
    return np.abs(a.p - b.p)


def l1_distance(a: MomentumDistribution, b: MomentumDistribution, exclude: Iterable[int] = ()) -> float:
    """Σ_{n ∉ exclude} |P_a(n) - P_b(n)|."""
    profile = deviation_profile(a, b)
    return float(np.sum(profile[_kept(a.grid, exclude)]))


def max_deviation(a: MomentumDistribution, b: MomentumDistribution, exclude: Iterable[int] = ()) -> float:
    profile = deviation_profile(a, b)[_kept(a.grid, exclude)]
    return float(profile.max()) if profile.size else 0.0


def pad_to(dist: MomentumDistribution, cutoff: int) -> MomentumDistribution:
    """Embed ``dist`` in the larger grid [-cutoff, cutoff] with zeros."""
    if cutoff < dist.cutoff:
        raise DomainError(f"cannot shrink grid |n| <= {dist.cutoff} to |n| <= {cutoff}")
    extra = cutoff - dist.cutoff
    return MomentumDistribution(
        grid=np.arange(-cutoff, cutoff + 1),
        p1=np.pad(dist.p1, extra),
        p2=np.pad(dist.p2, extra),
        route=dist.route,
        config=dist.config,
        ratchet=dist.ratchet,
        provenance=dict(dist.provenance),
    )


def fit_line(steps: Sequence[int], widths: Sequence[float]) -> BallisticFit:
    """Least-squares line through (T, std_dev); r² = 0 when the widths do not vary."""
    if len(steps) != len(widths):
        raise ConfigurationError("steps and widths differ in length")
    if len(steps) < 4:
        raise ConfigurationError(f"a ballistic fit needs at least 4 step counts, got {len(steps)}")
    t = np.asarray(steps, dtype=float)
    w = np.asarray(widths, dtype=float)
    if np.ptp(t) == 0:
        raise ConfigurationError("a ballistic fit needs distinct step counts")
    slope, intercept = np.polyfit(t, w, 1)
    residual = float(np.sum((w - (slope * t + intercept)) ** 2))
    spread = float(np.sum((w - w.mean()) ** 2))
    r_squared = 0.0 if spread == 0.0 else min(1.0, max(0.0, 1.0 - residual / spread))
    return BallisticFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        steps_range=(int(t.min()), int(t.max())),
    )


def ballistic_fit(
    config: WalkConfig,
    ratchet: RatchetSpec,
    steps_values: Sequence[int],
    route: Union[Route, str] = Route.SIMULATION,
) -> BallisticFit:
    """Fit std_dev against T, running ``config`` once per step count."""
    widths = [
        std_dev(compute_distribution(config.with_changes(steps=int(T)), ratchet, route))
        for T in steps_values
    ]
    return fit_line(list(steps_values), widths)
