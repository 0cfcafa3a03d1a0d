import math
from fractions import Fraction

import numpy as np
import pytest

from core.bessel import bessel_j
from core.errors import ConfigurationError, DomainError
from core.quantum_map import walk
from core.resonant import (
    LaurentPoly,
    Z,
    Z_TILDE,
    dickson_binet,
    dickson_closed_form,
    dickson_polynomials,
    dickson_recursive,
    operator_entries,
    resonant_distribution,
)
from core.state import RatchetSpec, WalkConfig


def test_laurent_arithmetic():
    x = LaurentPoly.monomial(1)
    inverse = LaurentPoly.monomial(-1)
    assert x * inverse == LaurentPoly.constant(1)
    assert Z * Z_TILDE == LaurentPoly({-2: 1, 2: -1})
    assert (Z - Z_TILDE) == LaurentPoly({1: 2})
    assert Z_TILDE.reflect() == -Z_TILDE
    assert (2 * Z).coefficient(1) == Fraction(2)
    assert (Z - Z).is_zero()
    assert Z.shift(1).exponents == (0, 2)


@pytest.mark.parametrize(
    "N,a1,a2",
    [
        (0, (1,), (1,)),
        (1, (-1, 1), (1, 1)),
        (2, (-1, -2, 1), (1, 0, 1)),
        (3, (-1, -1, -3, 1), (1, -1, -1, 1)),
    ],
)
def test_low_order_coefficients(N, a1, a2):
    coefficients = dickson_recursive(N)
    assert coefficients.a1 == a1
    assert coefficients.a2 == a2


@pytest.mark.parametrize("N", range(0, 21))
def test_closed_form_matches_recursion(N):
    assert dickson_closed_form(N) == dickson_recursive(N)


def test_scaled_coefficients_are_integers():
    a1, a2 = dickson_recursive(6).scaled()
    assert all(isinstance(v, int) for v in a1 + a2)
    assert a1[0] == -(2 ** 6)


def test_invalid_order():
    with pytest.raises(ConfigurationError):
        dickson_recursive(-1)


@pytest.mark.parametrize("N", range(0, 13))
def test_binet_form(N):
    x = 0.7 + 0.2j
    p1, p2 = dickson_polynomials(N)
    b1, b2 = dickson_binet(N, x)
    assert b1 == pytest.approx(p1.evaluate(x), rel=1e-9, abs=1e-9)
    assert b2 == pytest.approx(p2.evaluate(x), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("N", range(0, 7))
def test_operator_entries_are_matrix_powers(N):
    x = 1.1 * np.exp(0.3j)
    step = np.array([[1 / x, 1j * x], [1j / x, x]])
    power = np.linalg.matrix_power(step, N + 1)
    a1, a2, a3, a4 = operator_entries(N)
    expected = np.array([[a1.evaluate(x), 1j * a2.evaluate(x)], [1j * a3.evaluate(x), a4.evaluate(x)]])
    np.testing.assert_allclose(power, expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("N", range(0, 11))
def test_reflected_upper_row_is_the_lower_row(N):
    x = 0.9 * np.exp(0.7j)
    power = np.linalg.matrix_power(np.array([[1 / x, 1j * x], [1j / x, x]]), N + 1)
    p1, p2 = dickson_polynomials(N)
    a1, a2 = p1.shift(-1), p2.shift(1)
    assert a1.reflect().evaluate(x) == pytest.approx(power[1, 1], rel=1e-12, abs=1e-12)
    assert 1j * a2.reflect().evaluate(x) == pytest.approx(power[1, 0], rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("ladder_phase", [-math.pi / 2, 0.4])
def test_reversed_kick_swaps_the_levels(ladder_phase):
    ratchet = RatchetSpec(classes=(0, 1, 3), ladder_phase=ladder_phase)
    for T in (1, 4, 9):
        forward = resonant_distribution(WalkConfig(kick_strength=1.9, steps=T), ratchet)
        reverse = resonant_distribution(WalkConfig(kick_strength=-1.9, steps=T), ratchet)
        assert np.max(np.abs(forward.p1 - reverse.p2)) <= 1e-12
        assert np.max(np.abs(forward.p2 - reverse.p1)) <= 1e-12


@pytest.mark.parametrize("k", [0.8, 2.0])
@pytest.mark.parametrize("classes", [(0,), (0, 1), (-1, 0, 2)])
def test_matches_simulation(k, classes):
    ratchet = RatchetSpec(classes=classes)
    config = WalkConfig(kick_strength=k, steps=7)
    analytic = resonant_distribution(config, ratchet)
    simulated = walk(config, ratchet)
    assert np.max(np.abs(analytic.p - simulated.p)) <= 1e-10
    assert np.max(np.abs(analytic.p1 - simulated.p1)) <= 1e-10


def test_generic_weights_and_ladder():
    ratchet = RatchetSpec(classes=(0, 1), level_weights=(0.6, 0.8), ladder_phase=math.pi / 3)
    config = WalkConfig(kick_strength=1.5, steps=5)
    analytic = resonant_distribution(config, ratchet)
    assert np.max(np.abs(analytic.p - walk(config, ratchet).p)) <= 1e-10


def test_single_step_formula():
    k = 1.7
    config = WalkConfig(kick_strength=k, steps=1)
    dist = resonant_distribution(config, RatchetSpec())
    b = 1 / math.sqrt(2)
    for n in range(-5, 6):
        j = bessel_j(n, k)
        level1 = (b * (-1j) ** n + 1j * b * (1j) ** n) * j / math.sqrt(2)
        level2 = (1j * b * (-1j) ** n + b * (1j) ** n) * j / math.sqrt(2)
        assert dist.probability(n) == pytest.approx(abs(level1) ** 2 + abs(level2) ** 2, abs=1e-13)


def test_rejects_off_resonance():
    with pytest.raises(DomainError):
        resonant_distribution(WalkConfig(kick_strength=1.0, steps=3, quasimomentum=1e-4), RatchetSpec())
    with pytest.raises(DomainError):
        resonant_distribution(
            WalkConfig(kick_strength=1.0, steps=3, kick_period=2 * math.pi, free_evolution_mode="full"),
            RatchetSpec(),
        )
    with pytest.raises(ConfigurationError):
        resonant_distribution(WalkConfig(kick_strength=1.0, steps=0), RatchetSpec())


def test_full_mode_at_resonance_matches_simulation():
    config = WalkConfig(kick_strength=2.0, steps=6, free_evolution_mode="full")
    assert np.max(np.abs(resonant_distribution(config, RatchetSpec()).p - walk(config, RatchetSpec()).p)) <= 1e-10
