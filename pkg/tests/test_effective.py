import math

import numpy as np
import pytest

from core.bessel import bessel_j
from core.effective import (
    LaserParams,
    dimensionless_detuning,
    effective_coin,
    effective_kick_phases,
    effective_walk,
    kick_matrix,
    kick_strength,
    light_shift_phase,
    phase_gate,
    verify_compensation,
)
from core.errors import ConfigurationError
from core.quantum_map import COIN, StepOperatorPlan, walk
from core.state import RatchetSpec, WalkConfig


def test_kick_strength_sign_follows_detuning():
    assert kick_strength(2.0, 0.5, 4.0) == pytest.approx(2.0 ** 2 * 0.5 / 32.0)
    assert kick_strength(2.0, 0.5, -4.0) == -kick_strength(2.0, 0.5, 4.0)
    with pytest.raises(ZeroDivisionError):
        kick_strength(1.0, 1.0, 0.0)


def test_light_shift_phase():
    assert light_shift_phase(1.0, 2.0, 0.5, 0.25, 4.0) == pytest.approx(6.0)


def test_laser_params():
    laser = LaserParams(rabi_frequency=4.0, pulse_duration=1.0, detuning_1=2.0, detuning_2=1.0, period=0.5)
    k1, k2 = laser.kick_strengths()
    assert k1 < 0 < k2
    assert laser.light_shift_phase() == pytest.approx(abs(k1) + abs(k2) + 3.0 * 0.5)
    with pytest.raises(ConfigurationError):
        LaserParams(4.0, 1.0, -2.0, 1.0, 0.5)


def test_dimensionless_detuning():
    assert dimensionless_detuning(2e3, 1e-4) == pytest.approx(0.2)
    with pytest.raises(ConfigurationError):
        dimensionless_detuning(1.0, 0.0)


def test_effective_coin_matrix():
    phi = 0.7
    half = np.exp(0.5j * phi)
    expected = np.array([[half, 1j / half], [1j * half, 1 / half]]) / math.sqrt(2)
    np.testing.assert_allclose(effective_coin(phi), expected, atol=1e-15)
    np.testing.assert_allclose(effective_coin(0.0), COIN, atol=1e-15)
    np.testing.assert_allclose(phase_gate(phi) @ phase_gate(-phi), np.eye(2), atol=1e-15)


def test_kick_phases_undo_the_gate():
    phi = 1.3
    gate = np.diag(phase_gate(phi))
    phases = np.array(effective_kick_phases(phi))
    np.testing.assert_allclose(gate * phases, [1.0, 1.0], atol=1e-15)


def test_kick_matrix_column_is_the_band():
    cutoff = 30
    matrix = kick_matrix(1.5, cutoff)
    size = 2 * cutoff + 1
    for n in range(-6, 7):
        assert matrix[n + cutoff, cutoff] == pytest.approx((-1j) ** n * bessel_j(n, 1.5), abs=1e-14)
        assert matrix[size + n + cutoff, size + cutoff] == pytest.approx((1j) ** n * bessel_j(n, 1.5), abs=1e-14)
    assert np.all(matrix[:size, size:] == 0)


@pytest.mark.parametrize("k", [1.0, 2.5])
@pytest.mark.parametrize("phi", [0.3, 2.0, -4.1])
def test_compensation_on_truncated_basis(k, phi):
    assert verify_compensation(k, phi, cutoff=100) <= 1e-12


def test_wrong_gate_is_detected():
    assert verify_compensation(2.0, 1.0, cutoff=100, coin_phase=1.1) >= 0.01


@pytest.mark.parametrize("k, phi, gate", [(2.0, 1.0, None), (1.3, -0.4, None), (2.0, 1.0, 1.1), (0.7, 2.5, 0.2)])
def test_compensation_is_symmetric_under_kick_reversal(k, phi, gate):
    forward = verify_compensation(k, phi, cutoff=100, coin_phase=gate)
    reverse = verify_compensation(-k, -phi, cutoff=100, coin_phase=None if gate is None else -gate)
    assert reverse == pytest.approx(forward, abs=1e-13)


def test_compensated_walk_matches_ideal(two_classes):
    config = WalkConfig(kick_strength=2.0, steps=8)
    ideal = walk(config, two_classes)
    realised = effective_walk(config, two_classes, phi=2.4)
    np.testing.assert_allclose(realised.p, ideal.p, atol=1e-12)


def test_uncompensated_kick_changes_the_walk():
    config = WalkConfig(kick_strength=2.0, steps=4)
    ratchet = RatchetSpec(classes=(0, 1))
    plan = StepOperatorPlan.build(config, config.cutoff_for(ratchet), level_phases=effective_kick_phases(2.4))
    assert np.max(np.abs(walk(config, ratchet, plan).p - walk(config, ratchet).p)) > 1e-3
