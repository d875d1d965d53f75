"""
Tests for information-density sampling, noncoherent and pilot-assisted.
"""

import math

import numpy as np
import pytest
from scipy.special import gammaln

from rician_fbl.core.exceptions import UsageError
from rician_fbl.density.output_pdf import log_g_rayleigh
from rician_fbl.density.sampler import (
    InfoDensitySample,
    PilotDraws,
    pilot_effective_params,
    sample_info_density,
    sample_info_density_batch,
    sample_pilot_info_density,
    sample_pilot_info_density_batch,
)
from rician_fbl.engine.seeding import complex_normals
from rician_fbl.model.channel import ChannelParams, PilotConfig


def _rayleigh_oracle(params: ChannelParams, noise: np.ndarray) -> float:
    n, rho = params.n_c, params.rho
    w_norm2 = float(np.sum(np.abs(noise) ** 2))
    w_tilde_norm2 = w_norm2 + n * rho * abs(noise[0]) ** 2
    return w_tilde_norm2 - w_norm2 - math.log(n * rho + 1.0) - gammaln(n) - log_g_rayleigh(rho * n + 1.0, w_tilde_norm2 * rho * n, n - 1)


def test_zero_noise_gives_zero_information_density(rayleigh_point):
    assert sample_info_density(rayleigh_point, np.zeros(2)).value == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("n_c", [2, 12, 84])
def test_rayleigh_reduction(n_c):
    params = ChannelParams(kappa=0.0, rho=10**0.6, n_c=n_c, ell=1)
    noise = complex_normals(np.random.default_rng(n_c), (20, n_c))
    for row in noise:
        expected = _rayleigh_oracle(params, row)
        assert sample_info_density(params, row).value == pytest.approx(expected, rel=1e-8, abs=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("n_c", [2, 12, 84])
def test_rayleigh_reduction_full(n_c):
    params = ChannelParams(kappa=0.0, rho=10**0.6, n_c=n_c, ell=1)
    noise = complex_normals(np.random.default_rng(100 + n_c), (1000, n_c))
    batch = sample_info_density_batch(params, noise)
    for value, row in zip(batch, noise):
        assert value == pytest.approx(_rayleigh_oracle(params, row), rel=1e-8, abs=1e-8)


def test_wrong_noise_length(rayleigh_point):
    with pytest.raises(UsageError):
        sample_info_density(rayleigh_point, np.zeros(3))


def test_info_density_sample_must_be_finite():
    with pytest.raises(Exception):
        InfoDensitySample(math.nan)


@pytest.mark.parametrize("kappa", [0.0, 1.0, 10.0, 1e3])
@pytest.mark.parametrize("n_c", [2, 12])
def test_batch_matches_scalar(kappa, n_c):
    params = ChannelParams(kappa=kappa, rho=10**0.6, n_c=n_c, ell=1)
    noise = complex_normals(np.random.default_rng(7), (8, n_c))
    batch = sample_info_density_batch(params, noise)
    for value, row in zip(batch, noise):
        assert value == pytest.approx(sample_info_density(params, row).value, rel=1e-8, abs=1e-8)


def _change_of_measure(params: ChannelParams, samples: int, seed: int):
    noise = complex_normals(np.random.default_rng(seed), (samples, params.n_c))
    weights = np.exp(-sample_info_density_batch(params, noise))
    return weights.mean(), weights.std(ddof=1) / math.sqrt(samples)


@pytest.mark.parametrize("kappa,n_c,rho", [(0.0, 2, 1.0), (10.0, 2, 10**0.6), (1.0, 12, 1.0)])
def test_change_of_measure(kappa, n_c, rho):
    mean, stderr = _change_of_measure(ChannelParams(kappa=kappa, rho=rho, n_c=n_c, ell=1), 20_000, seed=3)
    assert abs(mean - 1.0) <= 4 * stderr


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [0.0, 1.0, 10.0, 1e3])
@pytest.mark.parametrize("n_c", [2, 12, 84])
@pytest.mark.parametrize("rho", [1.0, 10**0.6])
def test_change_of_measure_grid(kappa, n_c, rho):
    mean, stderr = _change_of_measure(ChannelParams(kappa=kappa, rho=rho, n_c=n_c, ell=1), 100_000, seed=4)
    assert abs(mean - 1.0) <= 4 * stderr


def test_pilot_effective_params_example():
    params = ChannelParams(kappa=0.0, rho=1.0, n_c=4, ell=1)
    effective = pilot_effective_params(1.0 + 0.0j, params, PilotConfig.for_channel(params, 1))
    assert effective.mu_p == pytest.approx(0.5)
    assert effective.sigma_p2 == pytest.approx(0.5)
    assert effective.n_d == 3


def test_pilot_effective_params_limits():
    params = ChannelParams(kappa=3.0, rho=1.0, n_c=4, ell=1)
    h_hat = 0.3 - 0.8j

    perfect = pilot_effective_params(h_hat, params, PilotConfig(n_p=1, n_c=4, rho=1e12))
    assert perfect.mu_p == pytest.approx(h_hat, abs=1e-10)
    assert perfect.sigma_p2 == pytest.approx(0.0, abs=1e-10)

    useless = pilot_effective_params(h_hat, params, PilotConfig(n_p=1, n_c=4, rho=1e-12))
    assert useless.mu_p == pytest.approx(params.mu_H, abs=1e-10)
    assert useless.sigma_p2 == pytest.approx(params.sigma_H2, rel=1e-10)

    pilots = PilotConfig.for_channel(params, 2)
    effective = pilot_effective_params(h_hat, params, pilots)
    assert effective.sigma_p2 < min(params.sigma_H2, pilots.sigma_e2)


def test_pilot_effective_params_needs_pilots(rayleigh_point):
    with pytest.raises(UsageError):
        pilot_effective_params(1.0, rayleigh_point, PilotConfig.for_channel(rayleigh_point, 0))


def test_pilot_sampler_without_pilots_is_noncoherent():
    params = ChannelParams(kappa=10.0, rho=2.0, n_c=4, ell=1)
    noise = complex_normals(np.random.default_rng(1), (4,))
    draws = PilotDraws(estimate=0.4 + 0.1j, noise=noise)
    pilot = sample_pilot_info_density(params, PilotConfig.for_channel(params, 0), draws)
    assert pilot.value == sample_info_density(params, noise).value


def test_pilot_sampler_against_straight_line_oracle(log_g_oracle):
    params = ChannelParams(kappa=0.0, rho=1.0, n_c=4, ell=1)
    pilots = PilotConfig.for_channel(params, 1)
    estimate = 0.6 - 0.3j
    noise = np.array([0.2 + 0.5j, -0.7 + 0.1j, 0.3 - 0.4j])

    # sigma_e2 = 1, h_hat ~ CN(0, 2), mu_p = h_hat / 2, sigma_p2 = 1/2, n_d = 3
    h_hat = math.sqrt(2.0) * estimate
    mu_p = h_hat / 2.0
    sigma_p2 = 0.5
    first = mu_p * math.sqrt(3.0) + math.sqrt(sigma_p2 * 3.0 + 1.0) * noise[0]
    w_norm2 = float(np.sum(np.abs(noise) ** 2))
    w_tilde_norm2 = abs(first) ** 2 + float(np.sum(np.abs(noise[1:]) ** 2))
    log_g = log_g_oracle(3.0 + 1.0 / sigma_p2, w_tilde_norm2 * 3.0, abs(mu_p) ** 2 / sigma_p2**2, 2)
    expected = abs(mu_p) ** 2 / sigma_p2 + w_tilde_norm2 - w_norm2 - math.log(2.5) + math.log(sigma_p2) - math.log(2.0) - log_g

    value = sample_pilot_info_density(params, pilots, PilotDraws(estimate=estimate, noise=noise)).value
    assert value == pytest.approx(expected, rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("kappa", [0.0, 10.0])
def test_pilot_batch_matches_scalar(kappa):
    params = ChannelParams(kappa=kappa, rho=10**0.6, n_c=12, ell=1)
    pilots = PilotConfig.for_channel(params, 2)
    rng = np.random.default_rng(9)
    estimates = complex_normals(rng, (6,))
    noise = complex_normals(rng, (6, pilots.n_d))
    batch = sample_pilot_info_density_batch(params, pilots, estimates, noise)
    for value, estimate, row in zip(batch, estimates, noise):
        expected = sample_pilot_info_density(params, pilots, PilotDraws(estimate=estimate, noise=row)).value
        assert value == pytest.approx(expected, rel=1e-8, abs=1e-8)


def test_pilot_change_of_measure():
    params = ChannelParams(kappa=10.0, rho=10**0.6, n_c=6, ell=1)
    pilots = PilotConfig.for_channel(params, 2)
    rng = np.random.default_rng(21)
    estimates = complex_normals(rng, (20_000,))
    noise = complex_normals(rng, (20_000, pilots.n_d))
    weights = np.exp(-sample_pilot_info_density_batch(params, pilots, estimates, noise))
    assert abs(weights.mean() - 1.0) <= 4 * weights.std(ddof=1) / math.sqrt(weights.size)
