"""
Domain types shared by every route: walk parameters, ratchet initial states,
the spinor wavefunction and momentum distributions.

Conventions
-----------
Momentum classes are integers n in [-N_max, N_max] stored densely with offset
indexing (index = n + N_max). Level 1 is row 0 of every (2, 2*N_max + 1)
amplitude array, level 2 is row 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from core.errors import ConfigurationError, DomainError, TruncationError

logger = logging.getLogger(__name__)

__all__ = [
    "RESONANT_PERIOD",
    "LEAKAGE_TOLERANCE",
    "CUTOFF_MARGIN",
    "FreeEvolutionMode",
    "Route",
    "WalkConfig",
    "RatchetSpec",
    "SpinorState",
    "MomentumDistribution",
    "build_initial_state",
    "distribution_of",
]

RESONANT_PERIOD = 4.0 * math.pi
LEAKAGE_TOLERANCE = 1e-10
CUTOFF_MARGIN = 20


class FreeEvolutionMode(str, Enum):
    """Phase applied between kicks: e^{-iτnβ} or the full e^{-iτ(n+β)²/2}."""

    SIMPLIFIED = "simplified"
    FULL = "full"


class Route(str, Enum):
    """Which computation produced a distribution."""

    SIMULATION = "simulate"
    RESONANT = "resonant"
    NEAR_RESONANT = "near-resonant"


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of a single kicked walk at fixed quasimomentum."""

    kick_strength: float
    steps: int
    quasimomentum: float = 0.0
    kick_period: float = RESONANT_PERIOD
    momentum_cutoff: Optional[int] = None
    free_evolution_mode: FreeEvolutionMode = FreeEvolutionMode.SIMPLIFIED

    def __post_init__(self):
        if isinstance(self.steps, bool) or int(self.steps) != self.steps:
            raise ConfigurationError(f"steps must be an integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        if self.steps < 0:
            raise ConfigurationError(f"steps must be non-negative, got {self.steps}")
        if not self.kick_period > 0:
            raise ConfigurationError(f"kick_period must be positive, got {self.kick_period}")
        if self.momentum_cutoff is not None:
            if int(self.momentum_cutoff) != self.momentum_cutoff or self.momentum_cutoff < 1:
                raise ConfigurationError(
                    f"momentum_cutoff must be a positive integer, got {self.momentum_cutoff!r}"
                )
            object.__setattr__(self, "momentum_cutoff", int(self.momentum_cutoff))
        object.__setattr__(self, "free_evolution_mode", FreeEvolutionMode(self.free_evolution_mode))
        object.__setattr__(self, "kick_strength", float(self.kick_strength))
        object.__setattr__(self, "quasimomentum", float(self.quasimomentum))
        object.__setattr__(self, "kick_period", float(self.kick_period))

    @property
    def period_multiple(self) -> float:
        """τ in units of the main resonance 4π."""
        return self.kick_period / RESONANT_PERIOD

    @property
    def free_phase_is_linear(self) -> bool:
        """True when free evolution reduces to e^{-iτnβ} up to a global phase."""
        if self.free_evolution_mode is FreeEvolutionMode.SIMPLIFIED:
            return True
        return float(self.period_multiple).is_integer()

    @property
    def is_resonant(self) -> bool:
        return self.quasimomentum == 0.0 and self.free_phase_is_linear

    def cutoff_for(self, ratchet: "RatchetSpec") -> int:
        """N_max for this walk: explicit value, or classes + ⌈|k|(T+1)⌉ + margin."""
        recommended = ratchet.max_class + self.steps * math.ceil(abs(self.kick_strength))
        if self.momentum_cutoff is not None:
            if self.momentum_cutoff < ratchet.max_class:
                raise ConfigurationError(
                    f"momentum_cutoff {self.momentum_cutoff} excludes ratchet class "
                    f"{ratchet.max_class}"
                )
            if self.momentum_cutoff < recommended:
                logger.warning(
                    "momentum_cutoff %d is below T*ceil(|k|) + max|s| = %d; "
                    "expect truncation errors",
                    self.momentum_cutoff,
                    recommended,
                )
            return self.momentum_cutoff
        return (
            ratchet.max_class
            + math.ceil(abs(self.kick_strength) * (self.steps + 1))
            + CUTOFF_MARGIN
        )

    def with_changes(self, **changes: Any) -> "WalkConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kick_strength": self.kick_strength,
            "steps": self.steps,
            "quasimomentum": self.quasimomentum,
            "kick_period": self.kick_period,
            "momentum_cutoff": self.momentum_cutoff,
            "free_evolution_mode": self.free_evolution_mode.value,
        }


@dataclass(frozen=True)
class RatchetSpec:
    """
    Initial momentum superposition (1/√S) Σ_s e^{isφ}|s⟩ on b₁|1⟩ + b₂|2⟩.

    The default ladder phase φ = -π/2 gives the e^{-isπ/2} ratchet.
    """

    classes: Tuple[int, ...] = (0,)
    level_weights: Tuple[float, float] = (1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    ladder_phase: float = -math.pi / 2.0

    def __post_init__(self):
        classes = tuple(self.classes)
        if not classes:
            raise ConfigurationError("ratchet needs at least one momentum class")
        for s in classes:
            if isinstance(s, bool) or int(s) != s:
                raise ConfigurationError(f"ratchet classes must be integers, got {s!r}")
        classes = tuple(int(s) for s in classes)
        if len(set(classes)) != len(classes):
            raise ConfigurationError(f"ratchet classes must be distinct, got {classes}")
        weights = tuple(float(b) for b in self.level_weights)
        if len(weights) != 2:
            raise ConfigurationError(f"level_weights needs two entries, got {weights}")
        if abs(weights[0] ** 2 + weights[1] ** 2 - 1.0) > 1e-12:
            raise ConfigurationError(f"level_weights must satisfy b1² + b2² = 1, got {weights}")
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "level_weights", weights)
        object.__setattr__(self, "ladder_phase", float(self.ladder_phase))

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def max_class(self) -> int:
        return max(abs(s) for s in self.classes)

    def class_phases(self) -> NDArray[np.complex128]:
        """e^{isφ} per class, in the order of ``classes``."""
        classes = np.asarray(self.classes)
        if self.ladder_phase == -math.pi / 2.0:
            return np.array([1.0, -1j, -1.0, 1j], dtype=np.complex128)[classes % 4]
        return np.exp(1j * self.ladder_phase * classes.astype(float))

    def ladder_signs(self) -> NDArray[np.complex128]:
        """
        Factors e^{is(φ - π/2)} that multiply J_{n-s} in the analytic routes.

        They equal (-1)^s exactly for the default ladder.
        """
        classes = np.asarray(self.classes)
        if self.ladder_phase == -math.pi / 2.0:
            return np.where(classes % 2 == 0, 1.0, -1.0).astype(np.complex128)
        return np.exp(1j * (self.ladder_phase - math.pi / 2.0) * classes.astype(float))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classes": list(self.classes),
            "level_weights": list(self.level_weights),
            "ladder_phase": self.ladder_phase,
        }


@dataclass(frozen=True, eq=False)
class SpinorState:
    """Walk wavefunction over (level, momentum class)."""

    amplitudes: NDArray[np.complex128]
    cutoff: int
    leakage: float = 0.0

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=np.complex128)
        if amplitudes.shape != (2, 2 * self.cutoff + 1):
            raise ConfigurationError(
                f"amplitudes must have shape (2, {2 * self.cutoff + 1}), got {amplitudes.shape}"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def grid(self) -> NDArray[np.int64]:
        return np.arange(-self.cutoff, self.cutoff + 1)

    def index(self, n: int) -> int:
        if abs(n) > self.cutoff:
            raise ConfigurationError(f"momentum class {n} outside |n| <= {self.cutoff}")
        return n + self.cutoff

    def amplitude(self, level: int, n: int) -> complex:
        return complex(self.amplitudes[level - 1, self.index(n)])

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True, eq=False)
class MomentumDistribution:
    """Per-level and total probabilities P1, P2, P over the momentum grid."""

    grid: NDArray[np.int64]
    p1: NDArray[np.float64]
    p2: NDArray[np.float64]
    route: Route
    config: Optional[WalkConfig] = None
    ratchet: Optional[RatchetSpec] = None
    provenance: Dict[str, Any] = field(default_factory=dict)
    p: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=np.int64)
        p1 = np.array(self.p1, dtype=float)
        p2 = np.array(self.p2, dtype=float)
        if not (grid.shape == p1.shape == p2.shape) or grid.ndim != 1:
            raise DomainError(
                f"grid and level distributions differ in shape: "
                f"{grid.shape}, {p1.shape}, {p2.shape}"
            )
        if np.any(p1 < 0) or np.any(p2 < 0):
            raise DomainError("probabilities must be non-negative")
        p = p1 + p2
        for array in (grid, p1, p2, p):
            array.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "route", Route(self.route))

    @property
    def cutoff(self) -> int:
        return int(self.grid[-1])

    def total(self) -> float:
        return float(np.sum(self.p))

    def check_normalized(self, tolerance: float = LEAKAGE_TOLERANCE) -> None:
        """Raise TruncationError when Σ P(n) is not 1 within ``tolerance``."""
        total = self.total()
        if abs(total - 1.0) > tolerance:
            raise TruncationError(abs(1.0 - total), self.cutoff)

    def probability(self, n: int) -> float:
        index = n - int(self.grid[0])
        if index < 0 or index >= len(self.grid):
            return 0.0
        return float(self.p[index])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": self.grid, "P": self.p, "P1": self.p1, "P2": self.p2})

    def metadata(self) -> Dict[str, Any]:
        return {
            "route": self.route.value,
            "walk": self.config.to_dict() if self.config else None,
            "ratchet": self.ratchet.to_dict() if self.ratchet else None,
            **self.provenance,
        }


def build_initial_state(config: WalkConfig, ratchet: RatchetSpec) -> SpinorState:
    """
    Build the ratchet state b_ℓ e^{isφ}/√S on every class s of both levels.

    Args:
        config: Walk parameters (only the momentum cutoff is used)
        ratchet: Initial classes, level weights and ladder phase

    Returns:
        Normalized SpinorState on the grid [-N_max, N_max]
    """
    cutoff = config.cutoff_for(ratchet)
    outside = [s for s in ratchet.classes if abs(s) > cutoff]
    if outside:
        raise ConfigurationError(f"ratchet classes {outside} lie outside |n| <= {cutoff}")

    amplitudes = np.zeros((2, 2 * cutoff + 1), dtype=np.complex128)
    phases = ratchet.class_phases() / math.sqrt(ratchet.size)
    columns = np.asarray(ratchet.classes) + cutoff
    for row, weight in enumerate(ratchet.level_weights):
        amplitudes[row, columns] = weight * phases

    state = SpinorState(amplitudes, cutoff)
    assert abs(state.norm() - 1.0) <= 1e-14
    return state


def distribution_of(
    state: SpinorState,
    route: Route = Route.SIMULATION,
    config: Optional[WalkConfig] = None,
    ratchet: Optional[RatchetSpec] = None,
) -> MomentumDistribution:
    """P_ℓ(n) = |amplitude(ℓ, n)|² with P = P1 + P2."""
    probabilities = np.abs(state.amplitudes) ** 2
    return MomentumDistribution(
        grid=state.grid,
        p1=probabilities[0],
        p2=probabilities[1],
        route=route,
        config=config,
        ratchet=ratchet,
        provenance={"leakage": state.leakage},
    )


def parse_classes(text: str) -> Tuple[int, ...]:
    """Parse a ratchet such as "0,1" or "-1, 0, 1"."""
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ConfigurationError(f"invalid ratchet classes {text!r}: {e}") from e


def parse_weights(text: str) -> Tuple[float, float]:
    """Parse level weights such as "0.6,0.8"."""
    try:
        values: Sequence[float] = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise ConfigurationError(f"invalid level weights {text!r}: {e}") from e
    if len(values) != 2:
        raise ConfigurationError(f"level weights need two values, got {text!r}")
    return values[0], values[1]
