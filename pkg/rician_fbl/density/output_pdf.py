"""
Output density of a shell code over the Rician block-fading channel.

When every per-block subcodeword is uniform on the sphere of radius
sqrt(n_c * rho), the output density depends on y only through ||y||^2 and is
expressed through the one-dimensional integral

    G(p, a, b, nu) = int_0^inf e^{-pz} (az)^{-nu/2} I_0(2 sqrt(bz)) I_nu(2 sqrt(az)) dz.

This module evaluates log G with the scalar half-line integrator, with a
vectorized fixed-panel rule for whole batches, and in closed form when b = 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammainc, gammaln, logsumexp

from ..core.exceptions import DomainError
from ..model.channel import ChannelParams
from ..numerics.quadrature import QuadratureSpec, integrate_halfline_log, integrate_log_panels
from ..numerics.special import ArrayOrFloat, LogValue, bessel_i_ratio, log_scaled_bessel_i

logger = logging.getLogger(__name__)

_LOG2 = math.log(2.0)
# Incomplete-gamma values below this are summed as a series instead
_GAMMAINC_FLOOR = 1e-290
# Nats kept below the peak beyond -log(tolerance) when cutting the batch integration range
_RANGE_MARGIN = 24.0
_MODE_BISECTIONS = 30
_MAX_RANGE_DOUBLINGS = 60
DEFAULT_CHUNK_ROWS = 8192


@dataclass(frozen=True)
class GIntegralArgs:
    """Arguments of the output-density integral G(p, a, b, nu)"""

    p: float
    a: float
    b: float
    nu: int

    def __post_init__(self):
        for name in ("p", "a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"G argument {name} must be finite, got {getattr(self, name)}")
        if not self.p > 0.0:
            raise DomainError(f"G argument p must be positive, got {self.p}")
        if self.a < 0.0 or self.b < 0.0:
            raise DomainError(f"G arguments a and b must be nonnegative, got a={self.a}, b={self.b}")
        if self.nu < 1:
            raise DomainError(f"Bessel order must be at least 1, got nu={self.nu}")

    @classmethod
    def for_output(cls, y_norm2: float, mu_abs2: float, sigma2: float, rho: float, n: int) -> "GIntegralArgs":
        """Arguments for an output of squared norm y_norm2 in n dimensions"""
        return cls(p=rho * n + 1.0 / sigma2, a=y_norm2 * rho * n, b=mu_abs2 / sigma2**2, nu=n - 1)

    def laplace_mode(self) -> float:
        """Stationary point of the large-argument approximation of the log-integrand"""
        return ((math.sqrt(self.a) + math.sqrt(self.b)) / self.p) ** 2


def log_integrand(args: GIntegralArgs, z: ArrayLike) -> ArrayOrFloat:
    """log of the G integrand at z >= 0; the Bessel factors are carried in scaled log form"""
    z = np.asarray(z, dtype=np.float64)
    value = -args.p * z + log_scaled_bessel_i(args.nu, args.a * z)
    if args.b > 0.0:
        value = value + log_scaled_bessel_i(0.0, args.b * z)
    return value


def log_G(args: GIntegralArgs, spec: Optional[QuadratureSpec] = None) -> LogValue:
    """
    log G(p, a, b, nu) by half-line quadrature.

    The mode search starts from a bracket around the Laplace stationary point.

    Raises:
        ConvergenceError: propagated from the integrator.
    """
    spec = spec or QuadratureSpec()
    hi = max(4.0 * args.laplace_mode(), 4.0 / args.p)
    return integrate_halfline_log(lambda z: log_integrand(args, z), spec.with_bracket(0.0, hi), vectorized=True)


def log_g_rayleigh(p: ArrayLike, a: ArrayLike, nu: int) -> ArrayOrFloat:
    """
    log G(p, a, 0, nu) in closed form.

    G = e^x x^{-nu} P(nu, x) / p with x = a / p and P the regularized lower
    incomplete gamma function; small x and underflowing P use the equivalent
    series sum_m x^m / Gamma(m + nu + 1).
    """
    p_arr = np.asarray(p, dtype=np.float64)
    a_arr = np.asarray(a, dtype=np.float64)
    if np.any(p_arr <= 0) or np.any(a_arr < 0):
        raise DomainError("log_g_rayleigh requires p > 0 and a >= 0")
    if nu < 1:
        raise DomainError(f"Bessel order must be at least 1, got nu={nu}")

    scalar = p_arr.ndim == 0 and a_arr.ndim == 0
    p_arr, a_arr = np.broadcast_arrays(np.atleast_1d(p_arr), np.atleast_1d(a_arr))
    x = a_arr / p_arr
    out = np.empty(x.shape, dtype=np.float64)

    lower = gammainc(nu, x)
    closed = (x >= 1.0) & (lower > _GAMMAINC_FLOOR)
    if np.any(closed):
        xc = x[closed]
        out[closed] = -np.log(p_arr[closed]) + xc - nu * np.log(xc) + np.log(lower[closed])

    series = ~closed
    if np.any(series):
        xs = x[series]
        terms = 60 + int(np.ceil(np.max(xs) + 10.0 * np.sqrt(np.max(xs))))
        m = np.arange(terms, dtype=np.float64)
        with np.errstate(divide="ignore"):
            log_terms = m * np.log(xs)[:, None] - gammaln(m + nu + 1.0)
        log_terms[:, 0] = -gammaln(nu + 1.0)
        out[series] = -np.log(p_arr[series]) + logsumexp(log_terms, axis=1)

    return float(out[0]) if scalar else out


def log_output_pdf(y_norm2: float, params: ChannelParams, spec: Optional[QuadratureSpec] = None) -> LogValue:
    """
    log f_Y(y) of the shell-code-induced output for one coherence block.

    Depends on y only through its squared norm, so it is unitarily invariant.
    """
    if not (y_norm2 >= 0.0):
        raise DomainError(f"Squared output norm must be nonnegative, got {y_norm2}")
    n, sigma2 = params.n_c, params.sigma_H2
    mu_abs2 = params.mu_H**2
    args = GIntegralArgs.for_output(y_norm2, mu_abs2, sigma2, params.rho, n)
    return float(gammaln(n)) - math.log(sigma2) - n * math.log(math.pi) - y_norm2 - mu_abs2 / sigma2 + log_G(args, spec)


# -- batch evaluation ---------------------------------------------------------


def _log_integrand_t(t: NDArray[np.float64], p, a, b, nu: int, with_los: bool) -> NDArray[np.float64]:
    """G integrand after z = t^2, in the log domain"""
    t2 = t * t
    with np.errstate(divide="ignore"):
        value = _LOG2 + np.log(t) - p * t2 + log_scaled_bessel_i(nu, a * t2)
    if with_los:
        value = value + log_scaled_bessel_i(0.0, b * t2)
    return value


def _dlog_integrand_t(t: NDArray[np.float64], p, a, b, nu: int, with_los: bool) -> NDArray[np.float64]:
    sqrt_a = np.sqrt(a)
    slope = 1.0 / t - 2.0 * p * t + 2.0 * sqrt_a * bessel_i_ratio(nu, 2.0 * sqrt_a * t)
    if with_los:
        sqrt_b = np.sqrt(b)
        slope = slope + 2.0 * sqrt_b * bessel_i_ratio(0.0, 2.0 * sqrt_b * t)
    return slope


def _log_g_panels(p, a, b, nu: int, panels: int, order: int, drop: float) -> NDArray[np.float64]:
    """Fixed-panel log G for rows with b > 0 (or mixed); all row operations are independent"""
    with_los = bool(np.any(b > 0.0))

    def h(t):
        return _log_integrand_t(t, p[:, None], a[:, None], b[:, None], nu, with_los)

    def h_flat(t):
        return _log_integrand_t(t, p, a, b, nu, with_los)

    # Mode by bisection on the slope; the slope is negative at t_hi because the Bessel ratios are below one
    s = np.sqrt(a) + np.sqrt(b)
    lo = np.zeros_like(p)
    hi = (s + np.sqrt(s * s + 2.0 * p)) / (2.0 * p)
    for _ in range(_MODE_BISECTIONS):
        mid = 0.5 * (lo + hi)
        rising = _dlog_integrand_t(mid, p, a, b, nu, with_los) > 0.0
        lo = np.where(rising, mid, lo)
        hi = np.where(rising, hi, mid)
    mode = 0.5 * (lo + hi)
    peak = h_flat(mode)

    width0 = 1.0 / np.sqrt(2.0 * p)
    right = width0.copy()
    for _ in range(_MAX_RANGE_DOUBLINGS):
        grow = h_flat(mode + right) > peak - drop
        if not np.any(grow):
            break
        right = np.where(grow, 2.0 * right, right)

    left = width0.copy()
    for _ in range(_MAX_RANGE_DOUBLINGS):
        lower = np.maximum(mode - left, 0.0)
        grow = (lower > 0.0) & (h_flat(lower) > peak - drop)
        if not np.any(grow):
            break
        left = np.where(grow, 2.0 * left, left)

    return integrate_log_panels(h, np.maximum(mode - left, 0.0), mode, mode + right, panels, order)


def log_g_array(p: ArrayLike, a: ArrayLike, b: ArrayLike, nu: int, panels: int = 4, order: int = 16, tolerance: float = 1e-9, chunk_rows: int = DEFAULT_CHUNK_ROWS) -> NDArray[np.float64]:
    """
    log G for many argument triples sharing one Bessel order.

    Rows with b = 0 use the closed form; the rest are integrated in t = sqrt(z)
    on ``panels`` Gauss-Legendre panels of ``order`` nodes per side of a
    bisection-located mode, over the range where the integrand is within
    24 - log(tolerance) nats of its peak (about 45 at the default tolerance).
    Each row's value depends only on that row.
    """
    p_arr, a_arr, b_arr = (np.atleast_1d(np.asarray(v, dtype=np.float64)) for v in (p, a, b))
    p_arr, a_arr, b_arr = np.broadcast_arrays(p_arr, a_arr, b_arr)
    if np.any(~(p_arr > 0)) or np.any(~(a_arr >= 0)) or np.any(~(b_arr >= 0)):
        raise DomainError("log_g_array requires p > 0, a >= 0 and b >= 0")

    out = np.empty(p_arr.shape, dtype=np.float64)
    rayleigh = b_arr == 0.0
    if np.any(rayleigh):
        out[rayleigh] = log_g_rayleigh(p_arr[rayleigh], a_arr[rayleigh], nu)

    if not 0.0 < tolerance < 1.0:
        raise DomainError(f"Tolerance must lie in (0, 1), got {tolerance}")
    drop = _RANGE_MARGIN - math.log(tolerance)
    rows = np.flatnonzero(~rayleigh)
    for start in range(0, rows.size, chunk_rows):
        idx = rows[start : start + chunk_rows]
        out[idx] = _log_g_panels(p_arr[idx], a_arr[idx], b_arr[idx], nu, panels, order, drop)

    logger.debug(f"log_g_array: {out.size} rows, {rows.size} by quadrature, nu={nu}")
    return out
