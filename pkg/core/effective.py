"""
Effective kick and coin of a physical realisation.

The light shifts of the two ground levels give kick strengths of opposite
sign plus a relative phase Φ = k1 + k2 + (Δ1 + Δ2)τ between the levels. A
phase gate M(Φ) = diag(e^{iΦ/2}, e^{-iΦ/2}) folded into the coin,
C_eff = C·M(Φ), undoes it: C_eff·K_eff = C·K.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag, toeplitz

from core.errors import ConfigurationError
from core.quantum_map import COIN, StepOperatorPlan, band_cutoff, kick_orders, walk
from core.state import MomentumDistribution, RatchetSpec, WalkConfig

__all__ = [
    "LaserParams",
    "kick_strength",
    "light_shift_phase",
    "dimensionless_detuning",
    "phase_gate",
    "effective_coin",
    "effective_kick_phases",
    "kick_matrix",
    "verify_compensation",
    "effective_walk",
]


def kick_strength(rabi_frequency: float, pulse_duration: float, detuning: float) -> float:
    """k = Ω²τ_p / (8Δ); the sign follows the detuning."""
    if detuning == 0:
        raise ZeroDivisionError("kick strength is undefined at zero detuning")
    return rabi_frequency ** 2 * pulse_duration / (8.0 * detuning)


def light_shift_phase(k1: float, k2: float, detuning1: float, detuning2: float, period: float) -> float:
    """Φ = k1 + k2 + (Δ1 + Δ2)τ, detunings already dimensionless."""
    return k1 + k2 + (detuning1 + detuning2) * period


def dimensionless_detuning(detuning_rad_s: float, time_unit_s: float) -> float:
    """
    Express a detuning in the walk's time unit.

    ``time_unit_s`` is the duration in seconds of one dimensionless time unit,
    so that Δ·τ equals the physical phase Δ_phys·(τ·time_unit_s).
    """
    if not time_unit_s > 0:
        raise ConfigurationError(f"time unit must be positive, got {time_unit_s}")
    return detuning_rad_s * time_unit_s


@dataclass(frozen=True)
class LaserParams:
    """Standing-wave pulse parameters; frequencies in rad/s, durations in s."""

    rabi_frequency: float
    pulse_duration: float
    detuning_1: float
    detuning_2: float
    period: float
    time_unit: float = 1.0

    def __post_init__(self):
        if not (self.detuning_1 > 0 and self.detuning_2 > 0):
            raise ConfigurationError(
                f"detunings must be positive magnitudes, got {self.detuning_1}, {self.detuning_2}"
            )
        if not self.time_unit > 0:
            raise ConfigurationError(f"time unit must be positive, got {self.time_unit}")

    def kick_strengths(self) -> Tuple[float, float]:
        """(k1, k2): level 1 sees -Δ1, level 2 sees +Δ2."""
        return (
            kick_strength(self.rabi_frequency, self.pulse_duration, -self.detuning_1),
            kick_strength(self.rabi_frequency, self.pulse_duration, self.detuning_2),
        )

    def light_shift_phase(self) -> float:
        k1, k2 = self.kick_strengths()
        return light_shift_phase(
            abs(k1),
            abs(k2),
            dimensionless_detuning(self.detuning_1, self.time_unit),
            dimensionless_detuning(self.detuning_2, self.time_unit),
            self.period,
        )


def phase_gate(phi: float) -> NDArray[np.complex128]:
    return np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])


def effective_coin(phi: float) -> NDArray[np.complex128]:
    """
    (1/√2)[[e^{iΦ/2}, ie^{-iΦ/2}], [ie^{iΦ/2}, e^{-iΦ/2}]], i.e. C·M(Φ).
    """
    return COIN @ phase_gate(phi)


def effective_kick_phases(phi: float) -> Tuple[complex, complex]:
    """Scalar phases K_eff carries on levels 1 and 2 relative to K."""
    return complex(np.exp(-0.5j * phi)), complex(np.exp(0.5j * phi))


def kick_matrix(
    k: float,
    cutoff: int,
    level_phases: Tuple[complex, complex] = (1.0, 1.0),
) -> NDArray[np.complex128]:
    """
    Block-diagonal kick on the basis (level 1, n) ⊕ (level 2, n), |n| <= cutoff.

    Entry (n, j) of block ℓ is (∓i)^{n-j} J_{n-j}(k) times the level phase.
    """
    size = 2 * cutoff + 1
    m_cut = min(band_cutoff(k), size - 1)
    orders = np.arange(0, size)
    values = np.zeros(size, dtype=np.complex128)
    values[: m_cut + 1] = kick_orders(k, m_cut)[m_cut:]
    # (∓i)^{-m} J_{-m} = (∓i)^m J_m, so both blocks are symmetric Toeplitz.
    powers = np.array([1.0, 1j, -1.0, -1j], dtype=np.complex128)
    band1, band2 = powers[(-orders) % 4] * values, powers[orders % 4] * values
    level1 = toeplitz(band1, band1)
    level2 = toeplitz(band2, band2)
    return block_diag(level_phases[0] * level1, level_phases[1] * level2)


def verify_compensation(
    k: float,
    phi: float,
    cutoff: int,
    coin_phase: Optional[float] = None,
) -> float:
    """
    Max element-wise |C_eff·K_eff - C·K| on the truncated basis.

    ``coin_phase`` sets the phase gate of the coin independently of the
    light-shift phase of the kick; it defaults to ``phi`` (compensated).
    """
    identity = np.eye(2 * cutoff + 1)
    ideal = np.kron(COIN, identity) @ kick_matrix(k, cutoff)
    gate = phi if coin_phase is None else coin_phase
    realised = np.kron(effective_coin(gate), identity) @ kick_matrix(k, cutoff, effective_kick_phases(phi))
    return float(np.max(np.abs(realised - ideal)))


def effective_walk(config: WalkConfig, ratchet: RatchetSpec, phi: float) -> MomentumDistribution:
    """Walk driven by K_eff and the compensating coin C_eff."""
    cutoff = config.cutoff_for(ratchet)
    plan = StepOperatorPlan.build(
        config,
        cutoff,
        coin=effective_coin(phi),
        level_phases=effective_kick_phases(phi),
    )
    return walk(config, ratchet, plan)
