import math

import numpy as np
import pytest
from scipy import special

from core.bessel import bessel_j
from core.errors import NumericalError, TruncationError
from core.observables import mean_momentum
from core.quantum_map import (
    COIN,
    StepOperatorPlan,
    apply_coin,
    apply_free,
    apply_kick,
    band_cutoff,
    free_phases,
    kick_band,
    kick_orders,
    propagate,
    walk,
)
from core.state import FreeEvolutionMode, RatchetSpec, WalkConfig, build_initial_state

LEVEL_ONE = RatchetSpec(level_weights=(1.0, 0.0))


def test_coin_is_unitary():
    np.testing.assert_allclose(COIN.conj().T @ COIN, np.eye(2), atol=1e-15)


def test_kick_band_rows():
    band = kick_band(1.5)
    m_cut = (band.shape[1] - 1) // 2
    for m in range(-5, 6):
        assert band[0, m + m_cut] == pytest.approx((-1j) ** m * bessel_j(m, 1.5), abs=1e-15)
        assert band[1, m + m_cut] == pytest.approx((1j) ** m * bessel_j(m, 1.5), abs=1e-15)


def test_single_kick_on_level_one():
    config = WalkConfig(kick_strength=2.0, steps=1)
    kicked = apply_kick(build_initial_state(config, LEVEL_ONE), 2.0)
    for n in range(-6, 7):
        assert kicked.amplitude(1, n) == pytest.approx((-1j) ** n * bessel_j(n, 2.0), abs=1e-14)
        assert kicked.amplitude(2, n) == 0


def test_coin_splits_level_one():
    config = WalkConfig(kick_strength=1.0, steps=1)
    mixed = apply_coin(build_initial_state(config, LEVEL_ONE))
    assert mixed.amplitude(1, 0) == pytest.approx(1 / math.sqrt(2))
    assert mixed.amplitude(2, 0) == pytest.approx(1j / math.sqrt(2))


def test_simplified_free_phases():
    config = WalkConfig(kick_strength=1.0, steps=1, quasimomentum=0.003)
    n = np.arange(-4, 5)
    np.testing.assert_allclose(free_phases(config, 4), np.exp(-1j * 4 * np.pi * n * 0.003), atol=1e-15)
    state = apply_free(build_initial_state(config, RatchetSpec(classes=(3,))), config)
    assert abs(state.amplitude(1, 3)) == pytest.approx(1 / math.sqrt(2))


def test_full_free_phases_at_resonance():
    config = WalkConfig(kick_strength=1.0, steps=1, free_evolution_mode=FreeEvolutionMode.FULL)
    np.testing.assert_allclose(free_phases(config, 30), np.ones(61), atol=1e-12)


def test_full_free_phases_differ_by_global_phase():
    full = WalkConfig(1.0, 1, quasimomentum=0.002, free_evolution_mode="full")
    simplified = full.with_changes(free_evolution_mode="simplified")
    ratio = free_phases(full, 25) / free_phases(simplified, 25)
    np.testing.assert_allclose(ratio, ratio[0] * np.ones_like(ratio), atol=1e-12)


def test_propagation_conserves_norm(two_classes):
    state = propagate(WalkConfig(kick_strength=2.5, steps=12, quasimomentum=0.01), two_classes)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert state.leakage <= 1e-10


def test_zero_steps_returns_initial_distribution(two_classes):
    dist = walk(WalkConfig(kick_strength=2.0, steps=0), two_classes)
    assert dist.probability(0) == pytest.approx(0.5)
    assert dist.probability(1) == pytest.approx(0.5)


def test_zero_kick_keeps_momentum(single_class):
    dist = walk(WalkConfig(kick_strength=0.0, steps=7), single_class)
    assert dist.probability(0) == pytest.approx(1.0, abs=1e-14)


def test_cutoff_too_small_raises():
    with pytest.raises(TruncationError):
        walk(WalkConfig(kick_strength=2.0, steps=10, momentum_cutoff=5), RatchetSpec())


def test_non_unitary_coin_is_rejected():
    config = WalkConfig(kick_strength=1.0, steps=1)
    with pytest.raises(NumericalError):
        StepOperatorPlan.build(config, 10, coin=np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_equal_weights_give_no_current(two_classes):
    # the two levels are kicked in opposite directions
    dist = walk(WalkConfig(kick_strength=2.0, steps=1), two_classes)
    assert mean_momentum(dist) == pytest.approx(0.5, abs=1e-10)


def test_distribution_is_tagged(single_class, resonant_walk):
    dist = walk(resonant_walk, single_class)
    assert dist.route.value == "simulate"
    assert dist.total() == pytest.approx(1.0, abs=1e-12)
    assert dist.metadata()["walk"]["steps"] == 6


def test_coin_fourth_power_is_minus_identity(two_classes):
    np.testing.assert_allclose(np.linalg.matrix_power(COIN, 4), -np.eye(2), atol=1e-15)
    state = build_initial_state(WalkConfig(kick_strength=1.0, steps=1), two_classes)
    turned = state
    for _ in range(4):
        turned = apply_coin(turned)
    np.testing.assert_allclose(turned.amplitudes, -state.amplitudes, atol=1e-15)


def test_long_walk_keeps_its_norm(two_classes):
    state = propagate(WalkConfig(kick_strength=3.0, steps=30), two_classes)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("classes", [(0,), (0, 1)])
def test_reversed_kick_swaps_the_levels(classes):
    ratchet = RatchetSpec(classes=classes)
    for beta in (0.0, 0.003):
        forward = walk(WalkConfig(kick_strength=1.7, steps=8, quasimomentum=beta), ratchet)
        reverse = walk(WalkConfig(kick_strength=-1.7, steps=8, quasimomentum=beta), ratchet)
        assert np.max(np.abs(forward.p1 - reverse.p2)) <= 1e-12
        assert np.max(np.abs(forward.p2 - reverse.p1)) <= 1e-12


def test_kick_orders_at_large_strength():
    values = kick_orders(100.0, band_cutoff(100.0))
    m_cut = band_cutoff(100.0)
    assert np.sum(values ** 2) == pytest.approx(1.0, abs=1e-13)
    for m in (0, 7, 99, 130):
        assert values[m_cut + m] == pytest.approx(special.jv(m, 100.0), abs=1e-15)
        assert values[m_cut - m] == pytest.approx((-1) ** m * special.jv(m, 100.0), abs=1e-15)


def test_strong_kick_walk(single_class):
    band = kick_band(100.0)
    assert band.shape == (2, 2 * band_cutoff(100.0) + 1)
    dist = walk(WalkConfig(kick_strength=100.0, steps=3), single_class)
    assert dist.total() == pytest.approx(1.0, abs=1e-12)
