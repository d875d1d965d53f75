"""
Information-density sampling for shell codes over Rician block fading.

For one coherence block with noise W, the receiver sees the rotated output
W~ = [mu sqrt(n rho) + sqrt(sigma2 n rho + 1) W_1, W_2, ..., W_n]. The
information density is the log-ratio of the conditional output density to
the shell-code output density, both evaluated at W~:

    S = |mu|^2/sigma2 + ||W~||^2 - ||W||^2 - log(sigma2 n rho + 1)
        + log sigma2 - log Gamma(n) - log G(p, ||W~||^2 rho n, |mu|^2/sigma2^2, n - 1)

with p = rho n + 1/sigma2. The noncoherent case uses (mu_H, sigma_H2, n_c);
with pilots, (mu_p(h_hat), sigma_p2, n_d) are substituted. All randomness is
injected by the caller, so every function here is deterministic.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln

from ..core.exceptions import ConvergenceError, UsageError
from ..model.channel import ChannelParams, PilotConfig
from ..numerics.quadrature import QuadratureSpec
from .output_pdf import DEFAULT_CHUNK_ROWS, GIntegralArgs, log_G, log_g_array

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InfoDensitySample:
    """One realization of the per-block information density, in nats"""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConvergenceError("Information density is not finite", {"value": self.value})


@dataclass(frozen=True)
class PilotEffectiveParams:
    """Channel law seen by the data symbols given a pilot-based estimate"""

    mu_p: complex
    sigma_p2: float
    n_d: int


@dataclass(frozen=True)
class PilotDraws:
    """Randomness for one pilot-assisted block: estimate draw and data noise"""

    estimate: complex
    noise: NDArray[np.complex128]


def _as_noise(noise: ArrayLike, length: int) -> NDArray[np.complex128]:
    vector = np.asarray(noise, dtype=np.complex128).ravel()
    if vector.size != length:
        raise UsageError(f"Noise vector must have {length} entries, got {vector.size}")
    return vector


def _shell_info_density(mu: complex, sigma2: float, n: int, rho: float, noise: NDArray[np.complex128], spec: Optional[QuadratureSpec]) -> float:
    w_norm2 = float(np.sum(np.abs(noise) ** 2))
    first = mu * math.sqrt(n * rho) + math.sqrt(sigma2 * n * rho + 1.0) * noise[0]
    w_tilde_norm2 = w_norm2 - abs(noise[0]) ** 2 + abs(first) ** 2
    mu_abs2 = abs(mu) ** 2

    args = GIntegralArgs.for_output(w_tilde_norm2, mu_abs2, sigma2, rho, n)
    return mu_abs2 / sigma2 + w_tilde_norm2 - w_norm2 - math.log1p(sigma2 * n * rho) + math.log(sigma2) - float(gammaln(n)) - log_G(args, spec)


def sample_info_density(params: ChannelParams, noise: ArrayLike, spec: Optional[QuadratureSpec] = None) -> InfoDensitySample:
    """
    Information density of one noncoherent block for the given noise draw.

    Raises:
        UsageError: noise does not have n_c entries.
        ConvergenceError: propagated from the quadrature.
    """
    vector = _as_noise(noise, params.n_c)
    value = _shell_info_density(params.mu_H, params.sigma_H2, params.n_c, params.rho, vector, spec)
    return InfoDensitySample(value)


def pilot_effective_params(h_hat: complex, params: ChannelParams, pilots: PilotConfig) -> PilotEffectiveParams:
    """
    Posterior mean and variance of the channel given its pilot estimate.

    Raises:
        UsageError: without pilots (the noncoherent path applies).
    """
    if not pilots.coherent:
        raise UsageError("pilot_effective_params needs n_p >= 1; use the noncoherent sampler for n_p = 0")
    sigma_H2, sigma_e2 = params.sigma_H2, pilots.sigma_e2
    total = sigma_H2 + sigma_e2
    mu_p = (sigma_H2 * complex(h_hat) + sigma_e2 * params.mu_H) / total
    return PilotEffectiveParams(mu_p=mu_p, sigma_p2=sigma_H2 * sigma_e2 / total, n_d=pilots.n_d)


def draw_estimate(params: ChannelParams, pilots: PilotConfig, estimate_draw: complex) -> complex:
    """Channel estimate h_hat ~ CN(mu_H, sigma_H2 + sigma_e2) from a standard complex normal draw"""
    return params.mu_H + math.sqrt(params.sigma_H2 + pilots.sigma_e2) * complex(estimate_draw)


def sample_pilot_info_density(params: ChannelParams, pilots: PilotConfig, draws: PilotDraws, spec: Optional[QuadratureSpec] = None) -> InfoDensitySample:
    """
    Information density of one pilot-assisted block.

    Without pilots this is the noncoherent information density of ``draws.noise``
    (n_c entries) and the estimate draw is unused.
    """
    if not pilots.coherent:
        return sample_info_density(params, draws.noise, spec)
    if pilots.n_d < 2:
        raise UsageError(f"Pilot-assisted blocks need n_d >= 2, got {pilots.n_d}")
    effective = pilot_effective_params(draw_estimate(params, pilots, draws.estimate), params, pilots)
    vector = _as_noise(draws.noise, effective.n_d)
    value = _shell_info_density(effective.mu_p, effective.sigma_p2, effective.n_d, params.rho, vector, spec)
    return InfoDensitySample(value)


# -- batches ------------------------------------------------------------------


def _shell_info_density_batch(mu: NDArray, sigma2: NDArray, n: int, rho: float, noise: NDArray[np.complex128], panels: int, order: int, tolerance: float, chunk_rows: int) -> NDArray[np.float64]:
    """Row-wise information density; mu and sigma2 broadcast against the rows of noise"""
    w_norm2 = np.sum(noise.real**2 + noise.imag**2, axis=1)
    first = mu * math.sqrt(n * rho) + np.sqrt(sigma2 * n * rho + 1.0) * noise[:, 0]
    w_tilde_norm2 = w_norm2 - np.abs(noise[:, 0]) ** 2 + np.abs(first) ** 2
    mu_abs2 = np.broadcast_to(np.abs(mu) ** 2, w_norm2.shape)
    sigma2 = np.broadcast_to(sigma2, w_norm2.shape)

    p = rho * n + 1.0 / sigma2
    a = w_tilde_norm2 * rho * n
    b = mu_abs2 / sigma2**2
    log_g = log_g_array(p, a, b, n - 1, panels=panels, order=order, tolerance=tolerance, chunk_rows=chunk_rows)

    values = mu_abs2 / sigma2 + w_tilde_norm2 - w_norm2 - np.log1p(sigma2 * n * rho) + np.log(sigma2) - gammaln(n) - log_g
    if not np.all(np.isfinite(values)):
        bad = np.flatnonzero(~np.isfinite(values))
        raise ConvergenceError("Non-finite information density in batch", {"rows": bad[:10].tolist(), "count": int(bad.size)})
    return values


def sample_info_density_batch(params: ChannelParams, noise: ArrayLike, panels: int = 4, order: int = 16, tolerance: float = 1e-9, chunk_rows: int = DEFAULT_CHUNK_ROWS) -> NDArray[np.float64]:
    """
    Noncoherent information densities for each row of ``noise`` (shape (rows, n_c)).
    """
    noise = np.asarray(noise, dtype=np.complex128)
    if noise.ndim != 2 or noise.shape[1] != params.n_c:
        raise UsageError(f"Noise batch must have shape (rows, {params.n_c}), got {noise.shape}")
    return _shell_info_density_batch(np.asarray(params.mu_H), np.asarray(params.sigma_H2), params.n_c, params.rho, noise, panels, order, tolerance, chunk_rows)


def sample_pilot_info_density_batch(params: ChannelParams, pilots: PilotConfig, estimates: ArrayLike, noise: ArrayLike, panels: int = 4, order: int = 16, tolerance: float = 1e-9, chunk_rows: int = DEFAULT_CHUNK_ROWS) -> NDArray[np.float64]:
    """
    Pilot-assisted information densities.

    ``estimates`` holds one standard complex normal per row and ``noise`` has
    shape (rows, n_d). Without pilots this equals sample_info_density_batch on
    ``noise`` and ``estimates`` is ignored.
    """
    if not pilots.coherent:
        return sample_info_density_batch(params, noise, panels=panels, order=order, tolerance=tolerance, chunk_rows=chunk_rows)
    noise = np.asarray(noise, dtype=np.complex128)
    estimates = np.asarray(estimates, dtype=np.complex128).ravel()
    if noise.ndim != 2 or noise.shape[1] != pilots.n_d or noise.shape[0] != estimates.size:
        raise UsageError(f"Pilot batch needs noise of shape ({estimates.size}, {pilots.n_d}), got {noise.shape}")

    sigma_H2, sigma_e2 = params.sigma_H2, pilots.sigma_e2
    h_hat = params.mu_H + math.sqrt(sigma_H2 + sigma_e2) * estimates
    mu_p = (sigma_H2 * h_hat + sigma_e2 * params.mu_H) / (sigma_H2 + sigma_e2)
    sigma_p2 = np.asarray(sigma_H2 * sigma_e2 / (sigma_H2 + sigma_e2))
    return _shell_info_density_batch(mu_p, sigma_p2, pilots.n_d, params.rho, noise, panels, order, tolerance, chunk_rows)
