"""
Closed-form momentum distribution of the walk at quantum resonance (β = 0).

With x = e^{ik cosθ}, the scaled step operator √2·U = [[x⁻¹, ix], [ix⁻¹, x]]
has trace z = x⁻¹ + x and determinant 2, so its powers are governed by the
Dickson-type recurrence p^(N) = z·p^(N-1) - 2·p^(N-2):

    (√2·U)^(N+1) = [[x⁻¹·p1(x),  i·x·p2(x)],
                    [i·x⁻¹·p2(x⁻¹), x·p1(x⁻¹)]]

The coefficients a_{l,1}, a_{l,2} of x^(N-2l) in p1, p2 are computed two ways
in exact arithmetic: by running the recurrence on Laurent polynomials, and
from triple binomial sums.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

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
    "LaurentPoly",
    "DicksonCoefficients",
    "Z",
    "Z_TILDE",
    "dickson_polynomials",
    "dickson_recursive",
    "dickson_closed_form",
    "dickson_binet",
    "operator_entries",
    "resonant_distribution",
]

Scalar = Union[int, Fraction]


class LaurentPoly:
    """Finite sum Σ_e c_e·x^e with rational coefficients and integer exponents."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[int, Scalar]] = None):
        self._coeffs: Dict[int, Fraction] = {}
        for exponent, coefficient in (coeffs or {}).items():
            value = Fraction(coefficient)
            if value != 0:
                self._coeffs[int(exponent)] = value

    @classmethod
    def monomial(cls, exponent: int, coefficient: Scalar = 1) -> "LaurentPoly":
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, value: Scalar) -> "LaurentPoly":
        return cls({0: value})

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._coeffs)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def coefficient(self, exponent: int) -> Fraction:
        return self._coeffs.get(exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x^k."""
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute x → x⁻¹ (equivalently k → -k)."""
        return LaurentPoly({-e: c for e, c in self._coeffs.items()})

    def evaluate(self, x: complex) -> complex:
        return complex(sum(float(c) * x ** e for e, c in self._coeffs.items()))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result = dict(self._coeffs)
        for e, c in other._coeffs.items():
            result[e] = result.get(e, Fraction(0)) + c
        return LaurentPoly(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({e: c * other for e, c in self._coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: Dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                result[e1 + e2] = result.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(result)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "LaurentPoly(0)"
        terms = " + ".join(f"{c}·x^{e}" for e, c in sorted(self._coeffs.items(), reverse=True))
        return f"LaurentPoly({terms})"


ONE = LaurentPoly.constant(1)
Z = LaurentPoly({-1: 1, 1: 1})
Z_TILDE = LaurentPoly({-1: 1, 1: -1})


@dataclass(frozen=True)
class DicksonCoefficients:
    """a1[l], a2[l] multiply x^(N-2l) in p1^(N), p2^(N)."""

    order: int
    a1: Tuple[Fraction, ...]
    a2: Tuple[Fraction, ...]

    def scaled(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Coefficients times 2^N as integers."""
        scale = 2 ** self.order

        def to_int(values: Iterable[Fraction]) -> Tuple[int, ...]:
            scaled = [v * scale for v in values]
            if any(v.denominator != 1 for v in scaled):
                raise DomainError(f"coefficients of order {self.order} are not multiples of 2^-N")
            return tuple(int(v) for v in scaled)

        return to_int(self.a1), to_int(self.a2)

    def as_arrays(self) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
        return (
            np.array([float(v) for v in self.a1]),
            np.array([float(v) for v in self.a2]),
        )


def _check_order(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or N < 0:
        raise ConfigurationError(f"polynomial order must be a non-negative integer, got {N!r}")
    return int(N)


@lru_cache(maxsize=None)
def dickson_polynomials(N: int) -> Tuple[LaurentPoly, LaurentPoly]:
    """(p1^(N), p2^(N)) from the recurrence p^(N) = z·p^(N-1) - 2·p^(N-2)."""
    N = _check_order(N)
    previous, current = (ONE, ONE), (Z_TILDE, Z)
    if N == 0:
        return previous
    for _ in range(N - 1):
        previous, current = current, tuple(Z * c - 2 * p for c, p in zip(current, previous))
    return current


def dickson_recursive(N: int) -> DicksonCoefficients:
    p1, p2 = dickson_polynomials(N)
    exponents = [N - 2 * l for l in range(N + 1)]
    return DicksonCoefficients(
        order=N,
        a1=tuple(p1.coefficient(e) for e in exponents),
        a2=tuple(p2.coefficient(e) for e in exponents),
    )


def binomial(n: int, r: int) -> int:
    """C(n, r), zero outside 0 <= r <= n."""
    if n < 0 or r < 0 or r > n:
        return 0
    return math.comb(n, r)


def _ladder_sum(j: int, l: int, top: int) -> int:
    """Σ_{m=0}^{l} (-8)^m C(j, m) C(top - 2m, l - m)."""
    return sum((-8) ** m * binomial(j, m) * binomial(top - 2 * m, l - m) for m in range(l + 1))


def dickson_closed_form(N: int) -> DicksonCoefficients:
    """Coefficients from the explicit binomial sums, exact with denominator 2^N."""
    N = _check_order(N)
    scale = 2 ** N
    a1, a2 = [], []
    for l in range(N + 1):
        first = sum(
            (binomial(N, 2 * j) - binomial(N, 2 * j + 1)) * _ladder_sum(j, l, N)
            for j in range(N // 2 + 1)
        )
        second = sum(binomial(N, 2 * j + 1) * _ladder_sum(j, l, N - 1) for j in range(N // 2 + 1))
        third = 0
        if l >= 1:
            third = sum(
                binomial(N, 2 * j + 1) * _ladder_sum(j, l - 1, N - 1)
                for j in range(N // 2 + 1)
            )
        a1.append(Fraction(first - 2 * second + 2 * third, scale))
        a2.append(
            Fraction(
                sum(binomial(N + 1, 2 * j + 1) * _ladder_sum(j, l, N) for j in range(N // 2 + 1)),
                scale,
            )
        )
    return DicksonCoefficients(order=N, a1=tuple(a1), a2=tuple(a2))


def dickson_binet(N: int, x: complex) -> Tuple[complex, complex]:
    """
    Evaluate p1^(N), p2^(N) at x from the roots r± = (z ± √(z²-8))/2.

    p^(N) = ½(1 + w/√(z²-8))·r₊^N + ½(1 - w/√(z²-8))·r₋^N
    with w = 2z̃ - z for p1 and w = z for p2.
    """
    N = _check_order(N)
    x = complex(x)
    z = 1.0 / x + x
    z_tilde = 1.0 / x - x
    root = cmath.sqrt(z * z - 8.0)
    if abs(root) < 1e-12:
        raise DomainError("z² = 8 is a double root; the root form does not apply")
    upper, lower = (z + root) / 2.0, (z - root) / 2.0

    def combine(w: complex) -> complex:
        return 0.5 * (1.0 + w / root) * upper ** N + 0.5 * (1.0 - w / root) * lower ** N

    return combine(2.0 * z_tilde - z), combine(z)


def operator_entries(N: int) -> Tuple[LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly]:
    """
    Entries of (√2·U)^(N+1) as (A1, A2/i, A3/i, A4).

    A1 = x⁻¹·p1, A2 = i·x·p2, and A3, A4 are A2, A1 with k → -k.
    """
    p1, p2 = dickson_polynomials(N)
    a1 = p1.shift(-1)
    a2 = p2.shift(1)
    return a1, a2, a2.reflect(), a1.reflect()


def resonant_distribution(config: WalkConfig, ratchet: RatchetSpec) -> MomentumDistribution:
    """
    P(n; T) at β = 0 from the Dickson coefficients of order N = T - 1.

    The level-1 amplitude is b1·Σ_l a_{l,1} R((N-2l-1)k) + i·b2·Σ_l a_{l,2} R((N-2l+1)k),
    the level-2 amplitude is i·b1·Σ_l a_{l,2} R(-(N-2l+1)k) + b2·Σ_l a_{l,1} R(-(N-2l-1)k),
    with R(q)(n) = Σ_s e^{is(φ-π/2)} J_{n-s}(q); P_ℓ = |amplitude_ℓ|² / (2^T S).
    """
    if config.quasimomentum != 0.0:
        raise DomainError(
            f"resonant route requires β = 0 (got {config.quasimomentum}); "
            f"use the near-resonant route"
        )
    if not config.free_phase_is_linear:
        raise DomainError(
            f"full free evolution with τ = {config.kick_period} is not resonant; "
            f"τ must be a multiple of 4π"
        )
    if config.steps < 1:
        raise ConfigurationError("resonant route needs at least one step")

    T = config.steps
    N = T - 1
    k = config.kick_strength
    cutoff = config.cutoff_for(ratchet)
    grid = np.arange(-cutoff, cutoff + 1)
    classes = np.asarray(ratchet.classes)
    m_lo = -cutoff - int(classes.max())
    m_hi = cutoff - int(classes.min())

    multiples = np.arange(-T, T + 1)
    table = bessel_table(multiples * k, m_lo, m_hi)
    signs = ratchet.ladder_signs()
    ladder = np.zeros((grid.size, multiples.size), dtype=np.complex128)
    for sign, s in zip(signs, classes):
        ladder += sign * table[grid - s - m_lo]

    def column(q: int) -> NDArray[np.complex128]:
        return ladder[:, q + T]

    a1, a2 = dickson_recursive(N).as_arrays()
    b1, b2 = ratchet.level_weights
    level1 = np.zeros(grid.size, dtype=np.complex128)
    level2 = np.zeros(grid.size, dtype=np.complex128)
    for l in range(N + 1):
        level1 += b1 * a1[l] * column(N - 2 * l - 1) + 1j * b2 * a2[l] * column(N - 2 * l + 1)
        level2 += 1j * b1 * a2[l] * column(-(N - 2 * l + 1)) + b2 * a1[l] * column(-(N - 2 * l - 1))

    norm = 2.0 ** T * ratchet.size
    logger.debug("resonant sum over %d Dickson terms at k=%g", N + 1, k)
    dist = MomentumDistribution(
        grid=grid,
        p1=np.abs(level1) ** 2 / norm,
        p2=np.abs(level2) ** 2 / norm,
        route=Route.RESONANT,
        config=config,
        ratchet=ratchet,
    )
    dist.check_normalized(LEAKAGE_TOLERANCE)
    return dist
