"""
Tests for the log-domain special functions.
"""

import math

import numpy as np
import pytest

from rician_fbl.core.exceptions import DomainError, UsageError
from rician_fbl.numerics.special import bessel_i_ratio, log_bessel_i, log_scaled_bessel_i, log_sum_exp, q_function, q_inv

ORDERS = [0, 1, 7, 41, 83]
ARGUMENTS = [1e-3, 1.0, 10.0, 1e2, 1e4]


def test_log_bessel_i_at_zero():
    assert log_bessel_i(0, 0.0) == 0.0
    assert log_bessel_i(5, 0.0) == -math.inf


def test_log_bessel_i_unit_argument():
    assert log_bessel_i(0, 1.0) == pytest.approx(math.log(1.2660658777520082), abs=1e-12)


@pytest.mark.parametrize("nu", ORDERS)
@pytest.mark.parametrize("x", ARGUMENTS)
def test_log_bessel_i_matches_series_oracle(nu, x, log_bessel_oracle):
    expected = log_bessel_oracle(nu, x)
    assert log_bessel_i(nu, x) == pytest.approx(expected, rel=1e-10, abs=0.0)


@pytest.mark.parametrize("x", [1e-6, 1e-4, 0.3])
def test_log_bessel_i_order_zero_near_zero_is_relative_accurate(x, log_bessel_oracle):
    # log I_0(x) is about x^2 / 4 here
    assert log_bessel_i(0, x) == pytest.approx(log_bessel_oracle(0, x), rel=1e-10, abs=0.0)


def test_log_bessel_i_large_order_against_oracle(log_bessel_oracle):
    expected = log_bessel_oracle(83, 500.0)
    assert log_bessel_i(83, 500.0) == pytest.approx(expected, rel=1e-10)


def test_log_bessel_i_never_overflows():
    value = log_bessel_i(0, 1e6)
    assert math.isfinite(value)
    assert value == pytest.approx(1e6 - 0.5 * math.log(2 * math.pi * 1e6), rel=1e-12)


def test_log_bessel_i_monotone_in_order():
    for x in ARGUMENTS:
        values = log_bessel_i(np.arange(0, 84), x)
        assert np.all(np.diff(values) <= 0)


def test_log_bessel_i_vectorized_matches_scalar():
    nu = np.array([0, 3, 41])
    x = np.array([0.5, 20.0, 3e3])
    vector = log_bessel_i(nu, x)
    for i in range(3):
        assert vector[i] == pytest.approx(log_bessel_i(int(nu[i]), float(x[i])), rel=1e-14)


def test_log_bessel_i_rejects_negative_inputs():
    with pytest.raises(DomainError):
        log_bessel_i(0, -1.0)
    with pytest.raises(DomainError):
        log_bessel_i(-1, 1.0)


def test_log_scaled_bessel_i_limit_and_continuity():
    assert log_scaled_bessel_i(4, 0.0) == pytest.approx(-math.lgamma(5.0))
    below = log_scaled_bessel_i(7, 1.0 - 1e-12)
    above = log_scaled_bessel_i(7, 1.0 + 1e-12)
    assert below == pytest.approx(above, abs=1e-10)
    u = 250.0
    assert log_scaled_bessel_i(3, u) == pytest.approx(-1.5 * math.log(u) + log_bessel_i(3, 2 * math.sqrt(u)), rel=1e-14)


def test_bessel_i_ratio_bounds():
    x = np.array([0.0, 1e-3, 1.0, 50.0, 1e5])
    ratio = bessel_i_ratio(11, x)
    assert ratio[0] == 0.0
    assert np.all(ratio >= 0.0) and np.all(ratio < 1.0)
    assert np.all(np.diff(ratio) > 0)


def test_q_inv_known_values():
    assert q_inv(0.5) == pytest.approx(0.0, abs=1e-15)
    assert q_inv(1e-3) == pytest.approx(3.090232306167813, rel=1e-12)
    assert q_inv(0.8) == pytest.approx(-q_inv(0.2), rel=1e-12)


@pytest.mark.parametrize("epsilon", [1e-6, 1e-3, 0.1, 0.5, 0.9])
def test_q_of_q_inv_is_identity(epsilon):
    assert q_function(q_inv(epsilon)) == pytest.approx(epsilon, abs=1e-10)


@pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.1, 1.5])
def test_q_inv_domain(epsilon):
    with pytest.raises(DomainError):
        q_inv(epsilon)


def test_log_sum_exp_examples():
    assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2.0))
    assert log_sum_exp([-math.inf, 3.5]) == 3.5
    assert log_sum_exp([700.0, 700.0, 700.0]) == pytest.approx(700.0 + math.log(3.0), rel=1e-15)
    assert log_sum_exp([-math.inf, -math.inf]) == -math.inf


def test_log_sum_exp_order_independent():
    values = np.random.default_rng(3).normal(scale=200.0, size=50)
    assert log_sum_exp(values) == pytest.approx(log_sum_exp(values[::-1]), abs=1e-12)


def test_log_sum_exp_rejects_empty():
    with pytest.raises(UsageError):
        log_sum_exp([])
