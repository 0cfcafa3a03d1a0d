import logging
import math

import numpy as np
import pytest

from core.ensemble import EnsembleSpec, averaged_distribution, pairwise_sum, sample_betas
from core.errors import ConfigurationError
from core.observables import l1_distance, max_deviation
from core.quantum_map import walk
from core.state import Route, WalkConfig


def test_sigma_from_fwhm():
    spec = EnsembleSpec(fwhm=0.01)
    assert spec.sigma == pytest.approx(0.01 / (2 * math.sqrt(2 * math.log(2))))


@pytest.mark.parametrize(
    "fields",
    [{"fwhm": -0.1}, {"n_samples": 0}, {"seed": -1}, {"route": Route.RESONANT}],
)
def test_invalid_spec(fields):
    with pytest.raises(ConfigurationError):
        EnsembleSpec(**fields)


def test_samples_are_seeded():
    spec = EnsembleSpec(fwhm=0.01, n_samples=1000, seed=5)
    first, second = sample_betas(spec), sample_betas(spec)
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, sample_betas(EnsembleSpec(fwhm=0.01, n_samples=1000, seed=6)))


def test_sample_statistics():
    spec = EnsembleSpec(fwhm=0.01, n_samples=10000, seed=1)
    betas = sample_betas(spec)
    assert abs(betas.mean()) < 4 * spec.sigma / 100
    assert betas.std() == pytest.approx(spec.sigma, rel=0.03)


def test_zero_width_samples():
    np.testing.assert_array_equal(sample_betas(EnsembleSpec(n_samples=4)), np.zeros(4))


def test_samples_scale_with_width():
    narrow = sample_betas(EnsembleSpec(fwhm=0.005, n_samples=50, seed=2))
    wide = sample_betas(EnsembleSpec(fwhm=0.01, n_samples=50, seed=2))
    np.testing.assert_allclose(wide, 2 * narrow, rtol=1e-14)


def test_pairwise_sum():
    arrays = [np.full(3, float(i)) for i in range(7)]
    np.testing.assert_allclose(pairwise_sum(arrays), np.full(3, 21.0))
    np.testing.assert_array_equal(pairwise_sum(arrays[:1]), arrays[0])
    with pytest.raises(ConfigurationError):
        pairwise_sum([])


def test_zero_width_is_the_single_walk(two_classes):
    config = WalkConfig(kick_strength=2.0, steps=5)
    averaged = averaged_distribution(config, two_classes, EnsembleSpec(fwhm=0.0, n_samples=100))
    np.testing.assert_array_equal(averaged.p, walk(config, two_classes).p)


def test_vanishing_width_limit(single_class):
    config = WalkConfig(kick_strength=2.0, steps=4)
    averaged = averaged_distribution(config, single_class, EnsembleSpec(fwhm=1e-8, n_samples=20, seed=3))
    assert max_deviation(averaged, walk(config, single_class)) <= 1e-8


def test_same_seed_is_reproducible(single_class):
    config = WalkConfig(kick_strength=1.0, steps=5)
    spec = EnsembleSpec(fwhm=0.01, n_samples=30, seed=9)
    first = averaged_distribution(config, single_class, spec)
    second = averaged_distribution(config, single_class, spec)
    np.testing.assert_array_equal(first.p, second.p)
    assert first.provenance["ensemble"]["seed"] == 9


def test_simulated_average_is_normalized(single_class):
    config = WalkConfig(kick_strength=2.0, steps=6)
    averaged = averaged_distribution(config, single_class, EnsembleSpec(fwhm=0.02, n_samples=25, seed=4))
    assert averaged.total() == pytest.approx(1.0, abs=1e-10)
    assert averaged.provenance["total_probability"] == pytest.approx(1.0, abs=1e-10)
    assert averaged.route is Route.SIMULATION


def test_wider_ensemble_departs_further_from_path_sum(single_class):
    config = WalkConfig(kick_strength=2.0, steps=8)

    def distance(fwhm):
        simulated = averaged_distribution(config, single_class, EnsembleSpec(fwhm=fwhm, n_samples=64, seed=0))
        path_sum = averaged_distribution(
            config, single_class, EnsembleSpec(fwhm=fwhm, n_samples=64, seed=0, route=Route.NEAR_RESONANT)
        )
        return l1_distance(path_sum, simulated, exclude=(0, 1))

    assert distance(0.01) >= distance(0.005)


def test_broken_path_sum_ensemble_is_flagged(single_class, caplog):
    caplog.set_level(logging.WARNING)
    config = WalkConfig(kick_strength=2.0, steps=15)
    spec = EnsembleSpec(fwhm=0.004, n_samples=8, seed=1, route=Route.NEAR_RESONANT)
    averaged = averaged_distribution(config, single_class, spec)
    assert averaged.provenance["total_probability"] == pytest.approx(averaged.total(), rel=1e-14)
    assert "broken down" in caplog.text
