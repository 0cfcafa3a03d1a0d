"""
Near-resonant momentum distribution as a sum over 2^T Galton-board paths.

Moving every free evolution F = e^{-iτnβ} to the front turns the T kicks into
kicks at shifted angles θ - (T-l)τβ. Expanding the coin chain

    R_T = ∏_l [[(-1)^{m_l}, i], [i(-1)^{m_l}, 1]]

into monomials gives, per path c ∈ {0,1}^T, a unit phase i^{α(c)} for each
output level and an effective kick strength

    k_eff(c) = k · Σ_{l=1..T} (-1)^{c_l} e^{-iτβ(T-l)}        (c chronological)

that enters a single Bessel function J_{n-s}(k_eff). The only approximation is
J_n(|w|)e^{in·arg w} ≈ J_n(w); at β = 0 the sum is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from core.bessel import bessel_table
from core.errors import ConfigurationError, DomainError
from core.state import (
    LEAKAGE_TOLERANCE,
    MomentumDistribution,
    RatchetSpec,
    Route,
    WalkConfig,
)

logger = logging.getLogger(__name__)

__all__ = [
    "MAX_CHAIN_STEPS",
    "VALIDITY_LIMIT",
    "TOTAL_PROBABILITY_TOLERANCE",
    "check_total_probability",
    "WalkPath",
    "CoinChain",
    "PathGroup",
    "expand_coin_chain",
    "iter_paths",
    "group_paths_resonant",
    "near_resonant_level_distribution",
    "near_resonant_distribution",
]

MAX_CHAIN_STEPS = 20
# |β|·T above this and the path sum no longer tracks the exact map.
VALIDITY_LIMIT = 0.10
# |ΣP - 1| above this off resonance and the path sum has broken down.
TOTAL_PROBABILITY_TOLERANCE = 1e-2
PATH_CHUNK = 1 << 14

_I_POWERS = np.array([1.0, 1j, -1.0, -1j], dtype=np.complex128)


@dataclass(frozen=True)
class WalkPath:
    """One Galton-board path with its output phases and effective kick."""

    c: Tuple[int, ...]
    alpha1: int
    alpha2: int
    k_eff: complex

    @property
    def initial_level(self) -> int:
        return 1 if self.c[0] == 1 else 2

    @property
    def phase1(self) -> complex:
        return complex(_I_POWERS[self.alpha1 % 4])

    @property
    def phase2(self) -> complex:
        return complex(_I_POWERS[self.alpha2 % 4])


@dataclass(frozen=True, eq=False)
class CoinChain:
    """
    Monomials of the expanded coin chain.

    ``bits[p, l]`` is c_{l+1} of path p (1 when the atom is in level 1 during
    kick l+1); ``alpha[row, p]`` is the power of i in output row ``row``.
    """

    bits: NDArray[np.uint8]
    alpha: NDArray[np.int8]

    def __len__(self) -> int:
        return self.bits.shape[0]

    def __iter__(self) -> Iterator[Tuple[Tuple[int, ...], complex, complex]]:
        phases = self.phases
        for p in range(len(self)):
            yield tuple(int(b) for b in self.bits[p]), complex(phases[0, p]), complex(phases[1, p])

    @property
    def steps(self) -> int:
        return self.bits.shape[1]

    @property
    def phases(self) -> NDArray[np.complex128]:
        return _I_POWERS[self.alpha]

    @property
    def initial_levels(self) -> NDArray[np.int64]:
        return np.where(self.bits[:, 0] == 1, 1, 2)

    def effective_kicks(self, k: float, kick_period: float, quasimomentum: float) -> NDArray[np.complex128]:
        steps = self.steps
        delays = np.arange(steps - 1, -1, -1, dtype=float)
        weights = np.exp(-1j * kick_period * quasimomentum * delays)
        signs = 1.0 - 2.0 * self.bits.astype(float)
        return k * (signs @ weights)

    def matrix_entries(self, m: Sequence[int]) -> NDArray[np.complex128]:
        """R_T for the integer exponents m_1..m_T, resummed from the monomials."""
        parity = (self.bits.astype(np.int64) @ np.asarray(m, dtype=np.int64)) % 2
        signs = np.where(parity == 0, 1.0, -1.0)
        columns = self.initial_levels
        entries = np.zeros((2, 2), dtype=np.complex128)
        for column in (1, 2):
            mask = columns == column
            entries[:, column - 1] = self.phases[:, mask] @ signs[mask]
        return entries


@dataclass(frozen=True, eq=False)
class PathGroup:
    """
    All resonant paths with the same k_eff = multiple·k.

    ``phase_sums[row, initial]`` sums i^α over the group's paths that start
    in level ``initial + 1``, for output level ``row + 1``.
    """

    multiple: int
    count: int
    phase_sums: NDArray[np.complex128]

    @property
    def phase_sum1(self) -> complex:
        return complex(self.phase_sums[0].sum())

    @property
    def phase_sum2(self) -> complex:
        return complex(self.phase_sums[1].sum())


def _check_steps(T: int) -> None:
    if not 1 <= T <= MAX_CHAIN_STEPS:
        raise ConfigurationError(f"path expansion needs 1 <= T <= {MAX_CHAIN_STEPS}, got {T}")


def expand_coin_chain(T: int) -> CoinChain:
    """
    Expand R_T = M_T···M_1 into its 2^T monomials.

    M_l[a, j] = i^[a≠j]·(-1)^{m_l·[j=1]}; left-multiplying by M_l doubles
    the monomial list, appending the bit [j=1] and adding [a≠j] to row a.
    """
    _check_steps(T)
    bits = np.zeros((1, 0), dtype=np.uint8)
    alpha = np.zeros((2, 1), dtype=np.int8)
    for _ in range(T):
        count = bits.shape[0]
        bits = np.vstack([
            np.hstack([bits, np.ones((count, 1), dtype=np.uint8)]),
            np.hstack([bits, np.zeros((count, 1), dtype=np.uint8)]),
        ])
        alpha = np.vstack([
            np.concatenate([alpha[0], alpha[1] + 1]),
            np.concatenate([alpha[0] + 1, alpha[1]]),
        ]) % 4
    return CoinChain(bits=bits, alpha=alpha.astype(np.int8))


def iter_paths(config: WalkConfig) -> Iterator[WalkPath]:
    chain = expand_coin_chain(config.steps)
    k_eff = chain.effective_kicks(config.kick_strength, config.kick_period, config.quasimomentum)
    for p in range(len(chain)):
        yield WalkPath(
            c=tuple(int(b) for b in chain.bits[p]),
            alpha1=int(chain.alpha[0, p]),
            alpha2=int(chain.alpha[1, p]),
            k_eff=complex(k_eff[p]),
        )


def group_paths_resonant(T: int, quasimomentum: float = 0.0) -> Dict[int, PathGroup]:
    """
    Collapse the resonant paths into groups keyed by Σ_l (-1)^{c_l}.

    Runs a dynamic program over (current level, running sum), so memory
    stays O(T²) instead of O(2^T).
    """
    if quasimomentum != 0.0:
        raise DomainError(f"path grouping needs β = 0, got {quasimomentum}")
    _check_steps(T)

    def sigma(level: int) -> int:
        return -1 if level == 1 else 1

    # (level during the current kick, running sum) -> (phase sums by initial level, path count)
    frontier: Dict[Tuple[int, int], Tuple[NDArray[np.complex128], int]] = {}
    for level in (1, 2):
        start = np.zeros(2, dtype=np.complex128)
        start[level - 1] = 1.0
        frontier[(level, sigma(level))] = (start, 1)

    for _ in range(T - 1):
        advanced: Dict[Tuple[int, int], Tuple[NDArray[np.complex128], int]] = {}
        for (level, total), (sums, count) in frontier.items():
            for following in (1, 2):
                key = (following, total + sigma(following))
                turned = sums * (1j if following != level else 1.0)
                if key in advanced:
                    previous, seen = advanced[key]
                    advanced[key] = (previous + turned, seen + count)
                else:
                    advanced[key] = (turned, count)
        frontier = advanced

    groups: Dict[int, PathGroup] = {}
    for (level, total), (sums, count) in frontier.items():
        phase_sums = np.vstack([sums * (1j if row != level else 1.0) for row in (1, 2)])
        if total in groups:
            group = groups[total]
            groups[total] = PathGroup(total, group.count + count, group.phase_sums + phase_sums)
        else:
            groups[total] = PathGroup(total, count, phase_sums)
    return dict(sorted(groups.items()))


def _check_route(config: WalkConfig) -> None:
    if not config.free_phase_is_linear:
        raise DomainError(
            f"full free evolution with τ = {config.kick_period} is not near a resonance; "
            f"τ must be a multiple of 4π"
        )
    _check_steps(config.steps)


def _level_amplitudes(
    config: WalkConfig,
    ratchet: RatchetSpec,
    enumerate_paths: bool,
) -> Tuple[NDArray[np.int64], NDArray[np.complex128]]:
    T = config.steps
    k, tau, beta = config.kick_strength, config.kick_period, config.quasimomentum
    cutoff = config.cutoff_for(ratchet)
    grid = np.arange(-cutoff, cutoff + 1)
    classes = np.asarray(ratchet.classes)
    m_lo = -cutoff - int(classes.max())
    m_hi = cutoff - int(classes.min())
    b1, b2 = ratchet.level_weights

    # folded[:, order] = Σ_paths b_initial · i^α · J_order(k_eff) for both output rows
    folded = np.zeros((m_hi - m_lo + 1, 2), dtype=np.complex128)
    if beta == 0.0 and not enumerate_paths:
        groups = group_paths_resonant(T)
        arguments = np.array([q * k for q in groups], dtype=np.complex128)
        weights = np.array([group.phase_sums @ np.array([b1, b2]) for group in groups.values()])
        folded += bessel_table(arguments, m_lo, m_hi) @ weights
    else:
        chain = expand_coin_chain(T)
        k_eff = chain.effective_kicks(k, tau, beta)
        initial = np.where(chain.initial_levels == 1, b1, b2)
        path_weights = chain.phases * initial[None, :]
        arguments, inverse = np.unique(k_eff, return_inverse=True)
        weights = np.zeros((arguments.size, 2), dtype=np.complex128)
        for row in range(2):
            np.add.at(weights[:, row], inverse.ravel(), path_weights[row])
        for start in range(0, arguments.size, PATH_CHUNK):
            chunk = slice(start, start + PATH_CHUNK)
            folded += bessel_table(arguments[chunk], m_lo, m_hi) @ weights[chunk]
        logger.debug("summed %d paths over %d distinct kick strengths", len(chain), arguments.size)

    ladder = ratchet.ladder_signs() * np.exp(-1j * tau * beta * (T - 1) * classes)
    amplitudes = np.zeros((2, grid.size), dtype=np.complex128)
    for phase, s in zip(ladder, classes):
        amplitudes += phase * folded[grid - s - m_lo].T
    return grid, amplitudes


def near_resonant_level_distribution(
    config: WalkConfig,
    ratchet: RatchetSpec,
    level: int,
    enumerate_paths: bool = False,
) -> NDArray[np.float64]:
    """P_level(n) from the path sum, on the grid n = -N_max..N_max."""
    if level not in (1, 2):
        raise ConfigurationError(f"level must be 1 or 2, got {level}")
    _check_route(config)
    _, amplitudes = _level_amplitudes(config, ratchet, enumerate_paths)
    return np.abs(amplitudes[level - 1]) ** 2 / (2.0 ** config.steps * ratchet.size)


def near_resonant_distribution(
    config: WalkConfig,
    ratchet: RatchetSpec,
    enumerate_paths: bool = False,
    check_validity: bool = True,
) -> MomentumDistribution:
    """
    Path-sum momentum distribution at quasimomentum β.

    Args:
        config: Walk parameters, 1 <= T <= 20
        ratchet: Initial state definition
        enumerate_paths: Enumerate all 2^T paths even at β = 0
        check_validity: Warn when |β|·T exceeds the validity limit or the total
            probability strays from 1

    Returns:
        MomentumDistribution tagged NEAR_RESONANT; its total is 1 only at β = 0
        and is recorded as ``provenance["total_probability"]``
    """
    _check_route(config)
    beta, T = config.quasimomentum, config.steps
    if check_validity and abs(beta) * T > VALIDITY_LIMIT:
        logger.warning(
            "|β|·T = %.3f exceeds %.2f; the path-sum approximation is unreliable",
            abs(beta) * T,
            VALIDITY_LIMIT,
        )

    grid, amplitudes = _level_amplitudes(config, ratchet, enumerate_paths)
    probabilities = np.abs(amplitudes) ** 2 / (2.0 ** T * ratchet.size)
    total = float(probabilities.sum())
    dist = MomentumDistribution(
        grid=grid,
        p1=probabilities[0],
        p2=probabilities[1],
        route=Route.NEAR_RESONANT,
        config=config,
        ratchet=ratchet,
        provenance={"total_probability": total},
    )
    if beta == 0.0:
        dist.check_normalized(LEAKAGE_TOLERANCE)
    elif check_validity:
        check_total_probability(total, f"β = {beta:g}, T = {T}")
    return dist


def check_total_probability(total: float, context: str) -> bool:
    """Warn when a path-sum total strays from 1; return whether it is within tolerance."""
    if abs(total - 1.0) > TOTAL_PROBABILITY_TOLERANCE:
        logger.warning(
            "near-resonant total probability %.6g at %s deviates from 1 by more than %g; "
            "the path sum has broken down",
            total,
            context,
            TOTAL_PROBABILITY_TOLERANCE,
        )
        return False
    logger.debug("near-resonant total probability %.12f at %s", total, context)
    return True
