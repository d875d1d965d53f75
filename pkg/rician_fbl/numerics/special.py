"""
Special functions in the log domain.

Modified Bessel functions of the first kind, the Gaussian Q function and its
inverse, and log-sum-exp reduction. Every function accepts scalars or numpy
arrays and returns the same kind.
"""

import logging
from typing import Iterable, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, ive, logsumexp
from scipy.stats import norm

from ..core.exceptions import DomainError, UsageError

logger = logging.getLogger(__name__)

# Natural logarithm of a nonnegative quantity; -inf encodes zero.
LogValue = float

ArrayOrFloat = Union[float, NDArray[np.float64]]

# Below this argument the power series is summed directly (no cancellation in
# log(ive) + x); above it the exponentially scaled Amos routine is used.
_SERIES_ARGUMENT = 1.0
# ive results below this are too close to the subnormal range to trust.
_IVE_FLOOR = 1e-290
_SERIES_TERMS = 40


def _as_float_array(value: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(value, dtype=np.float64)


def _check_nonnegative(name: str, value: NDArray[np.float64]) -> None:
    if np.any(np.isnan(value)) or np.any(value < 0):
        raise DomainError(f"{name} must be nonnegative, got {value if value.ndim == 0 else 'array with negative entries'}")


def _log_power_series(nu: NDArray[np.float64], u: NDArray[np.float64]) -> NDArray[np.float64]:
    """log sum_m u^m / (m! Gamma(m + nu + 1)) for u > 0, relative-accurate when the result is near 0"""
    terms = _SERIES_TERMS + int(np.ceil(2.0 * np.sqrt(np.max(u, initial=0.0)) + np.max(u, initial=0.0) / 4.0))
    m = np.arange(terms, dtype=np.float64)
    log_terms = m * np.log(u)[..., None] - gammaln(m + 1.0) - gammaln(m + nu[..., None] + 1.0)
    # largest term plus log1p of the rest
    top = np.argmax(log_terms, axis=-1)[..., None]
    peak = np.take_along_axis(log_terms, top, axis=-1)
    ratios = np.exp(log_terms - peak)
    np.put_along_axis(ratios, top, 0.0, axis=-1)
    return peak[..., 0] + np.log1p(np.sum(ratios, axis=-1))


def log_bessel_i(nu: ArrayLike, x: ArrayLike) -> ArrayOrFloat:
    """
    Natural logarithm of the modified Bessel function I_nu(x).

    Small arguments use the power series summed in the log domain; larger ones
    use scipy's exponentially scaled ``ive`` and fall back to the series when the
    scaled value underflows (large order relative to the argument). Never
    overflows: log I_nu(1e6) is returned as a finite number.

    Raises:
        DomainError: for negative order or argument.
    """
    nu_arr = _as_float_array(nu)
    x_arr = _as_float_array(x)
    _check_nonnegative("Bessel order", nu_arr)
    _check_nonnegative("Bessel argument", x_arr)

    scalar = nu_arr.ndim == 0 and x_arr.ndim == 0
    nu_arr, x_arr = np.broadcast_arrays(np.atleast_1d(nu_arr), np.atleast_1d(x_arr))
    out = np.empty(x_arr.shape, dtype=np.float64)

    zero = x_arr == 0.0
    out[zero] = np.where(nu_arr[zero] == 0.0, 0.0, -np.inf)

    large = (~zero) & (x_arr >= _SERIES_ARGUMENT)
    if np.any(large):
        scaled = ive(nu_arr[large], x_arr[large])
        with np.errstate(divide="ignore"):
            values = np.log(scaled) + x_arr[large]
        underflow = ~(scaled > _IVE_FLOOR)
        if np.any(underflow):
            idx_nu = nu_arr[large][underflow]
            idx_x = x_arr[large][underflow]
            values[underflow] = idx_nu * np.log(idx_x / 2.0) + _log_power_series(idx_nu, (idx_x / 2.0) ** 2)
        out[large] = values

    small = (~zero) & (x_arr < _SERIES_ARGUMENT)
    if np.any(small):
        half = x_arr[small] / 2.0
        out[small] = nu_arr[small] * np.log(half) + _log_power_series(nu_arr[small], half**2)

    return float(out[0]) if scalar else out


def log_scaled_bessel_i(nu: ArrayLike, u: ArrayLike) -> ArrayOrFloat:
    """
    log( u^(-nu/2) I_nu(2 sqrt(u)) ) = log sum_m u^m / (m! Gamma(m + nu + 1)).

    The prefactor cancels the small-argument behaviour of I_nu, so the result
    tends to -log Gamma(nu + 1) as u -> 0 and u = 0 is allowed.
    """
    nu_arr = _as_float_array(nu)
    u_arr = _as_float_array(u)
    _check_nonnegative("Bessel order", nu_arr)
    _check_nonnegative("scaled Bessel argument", u_arr)

    scalar = nu_arr.ndim == 0 and u_arr.ndim == 0
    nu_arr, u_arr = np.broadcast_arrays(np.atleast_1d(nu_arr), np.atleast_1d(u_arr))
    out = np.empty(u_arr.shape, dtype=np.float64)

    zero = u_arr == 0.0
    out[zero] = -gammaln(nu_arr[zero] + 1.0)

    small = (~zero) & (u_arr < 1.0)
    if np.any(small):
        out[small] = _log_power_series(nu_arr[small], u_arr[small])

    large = (~zero) & (u_arr >= 1.0)
    if np.any(large):
        out[large] = -0.5 * nu_arr[large] * np.log(u_arr[large]) + log_bessel_i(nu_arr[large], 2.0 * np.sqrt(u_arr[large]))

    return float(out[0]) if scalar else out


def bessel_i_ratio(nu: ArrayLike, x: ArrayLike) -> ArrayOrFloat:
    """I_{nu+1}(x) / I_nu(x), in [0, 1); zero at x = 0"""
    nu_arr = _as_float_array(nu)
    x_arr = _as_float_array(x)
    with np.errstate(invalid="ignore"):
        ratio = np.exp(log_bessel_i(nu_arr + 1.0, x_arr) - log_bessel_i(nu_arr, x_arr))
    ratio = np.where(x_arr == 0.0, 0.0, ratio)
    return float(ratio) if np.ndim(ratio) == 0 else ratio


def q_function(x: ArrayLike) -> ArrayOrFloat:
    """Gaussian tail probability Q(x) = Pr{N(0,1) > x}"""
    value = norm.sf(x)
    return float(value) if np.ndim(value) == 0 else value


def q_inv(epsilon: float) -> float:
    """
    Inverse of the Gaussian Q function.

    Raises:
        DomainError: unless 0 < epsilon < 1.
    """
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"q_inv requires 0 < epsilon < 1, got {epsilon}")
    return float(norm.isf(epsilon))


def log_sum_exp(values: Iterable[LogValue]) -> LogValue:
    """
    log sum_i exp(v_i), shifted by the maximum so e^700 operands do not overflow.

    Raises:
        UsageError: on an empty sequence.
    """
    arr = np.fromiter(values, dtype=np.float64) if not isinstance(values, np.ndarray) else values.astype(np.float64).ravel()
    if arr.size == 0:
        raise UsageError("log_sum_exp needs at least one value")
    if np.all(arr == -np.inf):
        return -np.inf
    return float(logsumexp(arr))
