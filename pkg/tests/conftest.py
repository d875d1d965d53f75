"""
Shared fixtures: high-precision oracles and small channel points.
"""

import mpmath
import pytest

from rician_fbl.model.channel import ChannelParams


def _log_g_double_series(p: float, a: float, b: float, nu: int, drop_nats: float = 40.0) -> float:
    """log G by its double series, summed along diagonals j + m = d until a diagonal falls drop_nats below the total"""
    with mpmath.workdps(50):
        p, a, b = mpmath.mpf(p), mpmath.mpf(a), mpmath.mpf(b)
        total = mpmath.mpf(0)
        d = 0
        threshold = mpmath.exp(-drop_nats)
        previous = mpmath.mpf(0)
        while True:
            block = mpmath.mpf(0)
            for j in range(d + 1):
                m = d - j
                if b == 0 and j > 0:
                    break
                term = mpmath.factorial(d) / (mpmath.factorial(j) ** 2 * mpmath.factorial(m) * mpmath.gamma(m + nu + 1) * p ** (d + 1))
                if j:
                    term *= b**j
                if m:
                    term *= a**m
                block += term
            total += block
            if block < previous and block < total * threshold:
                return float(mpmath.log(total))
            previous = block
            d += 1


@pytest.fixture
def log_g_oracle():
    return _log_g_double_series


@pytest.fixture
def log_bessel_oracle():
    def oracle(nu: int, x: float) -> float:
        with mpmath.workdps(60):
            return float(mpmath.log(mpmath.besseli(nu, mpmath.mpf(x))))

    return oracle


@pytest.fixture
def rayleigh_point():
    return ChannelParams(kappa=0.0, rho=1.0, n_c=2, ell=1)
