"""
Exact step-by-step propagation of the kicked two-level walk in the truncated
momentum basis.

One step is U = F·C·K: the kick K convolves each level with its Jacobi-Anger
band, the coin C mixes the levels at every n, and the free evolution F is a
diagonal phase. Nothing here builds a full matrix.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import special

from core.errors import NumericalError, TruncationError
from core.state import (
    LEAKAGE_TOLERANCE,
    FreeEvolutionMode,
    MomentumDistribution,
    RatchetSpec,
    Route,
    SpinorState,
    WalkConfig,
    build_initial_state,
    distribution_of,
)

logger = logging.getLogger(__name__)

__all__ = [
    "COIN",
    "BAND_MARGIN",
    "StepOperatorPlan",
    "band_cutoff",
    "kick_band",
    "kick_orders",
    "apply_kick",
    "apply_coin",
    "apply_free",
    "free_phases",
    "propagate",
    "walk",
]

COIN = np.array([[1.0, 1j], [1j, 1.0]], dtype=np.complex128) / math.sqrt(2.0)
BAND_MARGIN = 25


def band_cutoff(k: float) -> int:
    """Largest kick order kept; the Bessel tail past |k| widens like |k|^{1/3}."""
    return math.ceil(abs(k) + BAND_MARGIN * max(1.0, abs(k)) ** (1.0 / 3.0))


def kick_orders(k: float, m_cut: int) -> NDArray[np.float64]:
    """J_m(k) for m = -m_cut..m_cut at real k, with no range limit."""
    positive = special.jv(np.arange(m_cut + 1), float(k))
    signs = np.where(np.arange(m_cut, 0, -1) % 2, -1.0, 1.0)
    return np.concatenate([signs * positive[:0:-1], positive])


def kick_band(
    k: float,
    level_phases: Sequence[complex] = (1.0, 1.0),
) -> NDArray[np.complex128]:
    """
    Convolution weights of the kick for orders m = -m_cut..m_cut.

    Row 0 holds (-i)^m J_m(k) (level 1, e^{-ik cosθ}), row 1 holds i^m J_m(k)
    (level 2, e^{+ik cosθ}); each row is scaled by its level phase.
    """
    m_cut = band_cutoff(k)
    orders = np.arange(-m_cut, m_cut + 1)
    values = kick_orders(k, m_cut)
    powers = np.array([1.0, 1j, -1.0, -1j], dtype=np.complex128)
    band = np.vstack([powers[(-orders) % 4] * values, powers[orders % 4] * values])
    captured = float(np.sum(np.abs(values) ** 2))
    if captured < 1.0 - 1e-14:
        raise NumericalError(f"kick band |m| <= {m_cut} captures only {captured!r} of J_m({k})²")
    return band * np.asarray(level_phases, dtype=np.complex128)[:, None]


@dataclass(frozen=True, eq=False)
class StepOperatorPlan:
    """Precomputed kick band, coin and free phases for one walk."""

    kick_band: NDArray[np.complex128]
    coin: NDArray[np.complex128]
    free_phases: NDArray[np.complex128]
    m_cut: int

    def __post_init__(self):
        deviation = np.max(np.abs(self.coin.conj().T @ self.coin - np.eye(2)))
        if deviation > 1e-14:
            raise NumericalError(f"coin is not unitary (deviation {deviation:.3e})")

    @classmethod
    def build(
        cls,
        config: WalkConfig,
        cutoff: int,
        coin: Optional[NDArray[np.complex128]] = None,
        level_phases: Sequence[complex] = (1.0, 1.0),
    ) -> "StepOperatorPlan":
        return cls(
            kick_band=kick_band(config.kick_strength, level_phases),
            coin=COIN if coin is None else np.asarray(coin, dtype=np.complex128),
            free_phases=free_phases(config, cutoff),
            m_cut=band_cutoff(config.kick_strength),
        )


def free_phases(config: WalkConfig, cutoff: int) -> NDArray[np.complex128]:
    """Diagonal of F over n = -cutoff..cutoff."""
    n = np.arange(-cutoff, cutoff + 1)
    tau, beta = config.kick_period, config.quasimomentum
    linear = tau * n * beta
    if config.free_evolution_mode is FreeEvolutionMode.SIMPLIFIED:
        return np.exp(-1j * linear)
    # τn²/2 = 2π·(τ/4π)·n²; keep only the fractional number of turns.
    turns = config.period_multiple * (n.astype(float) ** 2)
    quadratic = 2.0 * math.pi * (turns - np.round(turns))
    return np.exp(-1j * (quadratic + linear + tau * beta * beta / 2.0))


def _kick(amplitudes: NDArray[np.complex128], band: NDArray[np.complex128], cutoff: int):
    """Convolve both levels with their bands; return (amplitudes, leaked probability)."""
    m_cut = (band.shape[1] - 1) // 2
    width = amplitudes.shape[1]
    kicked = np.empty_like(amplitudes)
    leaked = 0.0
    for row in range(2):
        full = np.convolve(amplitudes[row], band[row])
        kicked[row] = full[m_cut:m_cut + width]
        leaked += float(np.sum(np.abs(full[:m_cut]) ** 2) + np.sum(np.abs(full[m_cut + width:]) ** 2))
    if leaked > LEAKAGE_TOLERANCE:
        raise TruncationError(leaked, cutoff)
    return kicked, leaked


def apply_kick(state: SpinorState, k: float) -> SpinorState:
    """Kick e^{∓ik cosθ} on levels 1 and 2."""
    amplitudes, leaked = _kick(state.amplitudes, kick_band(k), state.cutoff)
    return SpinorState(amplitudes, state.cutoff, state.leakage + leaked)


def apply_coin(state: SpinorState, coin: NDArray[np.complex128] = COIN) -> SpinorState:
    return SpinorState(coin @ state.amplitudes, state.cutoff, state.leakage)


def apply_free(state: SpinorState, config: WalkConfig) -> SpinorState:
    phases = free_phases(config, state.cutoff)
    return SpinorState(state.amplitudes * phases[None, :], state.cutoff, state.leakage)


def propagate(
    config: WalkConfig,
    ratchet: RatchetSpec,
    plan: Optional[StepOperatorPlan] = None,
) -> SpinorState:
    """
    Apply T steps of F·C·K to the ratchet state.

    Args:
        config: Walk parameters
        ratchet: Initial state definition
        plan: Operators to use; built from ``config`` when omitted

    Returns:
        Final SpinorState with the accumulated leakage
    """
    state = build_initial_state(config, ratchet)
    if plan is None:
        plan = StepOperatorPlan.build(config, state.cutoff)

    current = np.array(state.amplitudes)
    leakage = 0.0
    for _ in range(config.steps):
        current, leaked = _kick(current, plan.kick_band, state.cutoff)
        leakage += leaked
        current = plan.coin @ current
        current *= plan.free_phases[None, :]

    if leakage > LEAKAGE_TOLERANCE:
        raise TruncationError(leakage, state.cutoff)
    logger.debug("propagated %d steps at k=%g, leakage %.3e", config.steps, config.kick_strength, leakage)
    return SpinorState(current, state.cutoff, leakage)


def walk(
    config: WalkConfig,
    ratchet: RatchetSpec,
    plan: Optional[StepOperatorPlan] = None,
) -> MomentumDistribution:
    """Momentum distribution after T steps of the exact quantum map."""
    final = propagate(config, ratchet, plan)
    return distribution_of(final, Route.SIMULATION, config, ratchet)

