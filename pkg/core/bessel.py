"""
Bessel functions of the first kind J_n(z) for integer order and complex argument.

Single values come from ``scipy.special.jv``. Whole blocks of orders for many
arguments at once (the path sums need one row per effective kick strength)
are produced by a vectorised Miller backward recurrence, normalised against
``jv`` at order 0 or 1, whichever is larger in modulus for that argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from core.errors import BesselRangeError, ConfigurationError

__all__ = [
    "MAX_ARGUMENT",
    "BesselEval",
    "bessel_j",
    "bessel_eval",
    "bessel_row",
    "bessel_table",
]

MAX_ARGUMENT = 64.0
RECURRENCE_MARGIN = 30
# Below this modulus the recurrence coefficients 2n/z blow up; use jv directly.
SMALL_ARGUMENT = 1e-3
_RESCALE_ABOVE = 1e250

Number = Union[int, float, complex]


@dataclass(frozen=True)
class BesselEval:
    """One evaluated J_n(z) with its error estimate."""

    order: int
    argument: complex
    value: complex
    est_error: float


def _check_range(modulus: float) -> None:
    if not np.isfinite(modulus) or modulus > MAX_ARGUMENT:
        raise BesselRangeError(
            f"Bessel argument modulus {modulus:.6g} exceeds the supported range {MAX_ARGUMENT}"
        )


def bessel_j(n: int, z: Number) -> complex:
    """
    J_n(z) for integer n and complex z with |z| <= 64.

    Negative orders use J_{-n}(z) = (-1)^n J_n(z), so the symmetry holds
    bit-for-bit.
    """
    n = int(n)
    z = complex(z)
    _check_range(abs(z))
    if n < 0:
        value = bessel_j(-n, z)
        return -value if n % 2 else value
    if z.imag == 0.0:
        return complex(special.jv(n, z.real))
    return complex(special.jv(n, z))


def bessel_eval(n: int, z: Number) -> BesselEval:
    value = bessel_j(n, z)
    return BesselEval(
        order=int(n),
        argument=complex(z),
        value=value,
        est_error=1e-14 * max(1.0, abs(value)),
    )


def bessel_row(k_eff: Number, n_lo: int, n_hi: int) -> NDArray[np.complex128]:
    """J_n(k_eff) for n = n_lo..n_hi from a single recurrence pass."""
    return bessel_table(np.array([complex(k_eff)]), n_lo, n_hi)[:, 0]


def bessel_table(arguments: ArrayLike, n_lo: int, n_hi: int) -> NDArray[np.complex128]:
    """
    Evaluate J_n(z) for every order n_lo..n_hi and every argument z.

    Args:
        arguments: One-dimensional array of complex arguments
        n_lo: Lowest order (may be negative)
        n_hi: Highest order

    Returns:
        Complex array of shape (n_hi - n_lo + 1, len(arguments))
    """
    if n_lo > n_hi:
        raise ConfigurationError(f"empty order range [{n_lo}, {n_hi}]")
    z = np.atleast_1d(np.asarray(arguments, dtype=np.complex128))
    if z.ndim != 1:
        raise ConfigurationError("arguments must be one-dimensional")
    if z.size == 0:
        return np.zeros((n_hi - n_lo + 1, 0), dtype=np.complex128)
    _check_range(float(np.max(np.abs(z))))

    top = max(abs(n_lo), abs(n_hi))
    nonnegative = np.zeros((top + 1, z.size), dtype=np.complex128)

    small = np.abs(z) < SMALL_ARGUMENT
    if np.any(small):
        orders = np.arange(top + 1)[:, None]
        nonnegative[:, small] = special.jv(orders, z[small][None, :])
    if np.any(~small):
        nonnegative[:, ~small] = _miller(z[~small], top)

    orders = np.arange(n_lo, n_hi + 1)
    signs = np.where((orders < 0) & (orders % 2 == 1), -1.0, 1.0)
    return nonnegative[np.abs(orders)] * signs[:, None]


def _miller(z: NDArray[np.complex128], top: int) -> NDArray[np.complex128]:
    """Backward recurrence J_{n-1} = (2n/z) J_n - J_{n+1} for orders 0..top."""
    start = top + math.ceil(1.5 * float(np.max(np.abs(z)))) + RECURRENCE_MARGIN
    values = np.zeros((top + 1, z.size), dtype=np.complex128)

    upper = np.zeros(z.size, dtype=np.complex128)
    current = np.ones(z.size, dtype=np.complex128)
    for order in range(start, 0, -1):
        lower = (2.0 * order / z) * current - upper
        upper, current = current, lower
        if order - 1 <= top:
            values[order - 1] = current
        peak = np.abs(current) > _RESCALE_ABOVE
        if np.any(peak):
            scale = np.where(peak, 1.0 / _RESCALE_ABOVE, 1.0)
            current = current * scale
            upper = upper * scale
            values *= scale[None, :]

    # Scale the unnormalised solution to J at whichever of orders 0, 1 is larger.
    reference = np.where(np.abs(values[0]) >= np.abs(values[min(1, top)]), 0, min(1, top))
    columns = np.arange(z.size)
    exact = special.jv(reference, z)
    return values * (exact / values[reference, columns])[None, :]
