"""
Rate bounds from batches of information-density sums.

Achievability follows the dependence-testing (DT) bound, the converse is the
min-max bound evaluated through the empirical CDF of the sums, and the normal
approximation is the AWGN closed form. Monte-Carlo uncertainty is handled
conservatively: the DT error uses its upper confidence bound and the converse
uses a lower confidence bound of the CDF.
"""

import logging
import math
from typing import Callable, Tuple

import numpy as np
from scipy.stats import beta, norm

from ..core.exceptions import DomainError, UsageError
from ..model.channel import PilotConfig
from ..numerics.special import q_inv
from .models import BoundKind, BoundResult, ErrorEstimate, ResultFlag, SampleBatch

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
DEFAULT_CONFIDENCE = 0.95
# Bisection stops when the log2(M) interval is below this many bits
LOG2M_RESOLUTION = 1e-3
# Headroom above n log2(1 + rho) for the upper end of the log2(M) search
LOG2M_HEADROOM = 64.0


def _check_epsilon(epsilon: float) -> None:
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"Target error must lie in (0, 1), got {epsilon}")


def confidence_z(confidence: float) -> float:
    """One-sided normal quantile for a confidence level"""
    if not (0.0 < confidence < 1.0):
        raise DomainError(f"Confidence level must lie in (0, 1), got {confidence}")
    return float(norm.isf(1.0 - confidence))


def awgn_capacity(rho: float) -> float:
    """AWGN capacity log(1 + rho), nats per channel use"""
    if not rho > 0.0:
        raise DomainError(f"SNR must be positive, got {rho}")
    return math.log1p(rho)


def awgn_dispersion(rho: float) -> float:
    """AWGN channel dispersion rho (2 + rho) / (1 + rho)^2, nats squared"""
    if not rho > 0.0:
        raise DomainError(f"SNR must be positive, got {rho}")
    return rho * (2.0 + rho) / (1.0 + rho) ** 2


def dt_threshold(log2_M: float) -> float:
    """log((M - 1) / 2) in nats for M = 2^log2_M > 1"""
    x = log2_M * LN2
    log_m_minus_one = x + math.log1p(-math.exp(-x)) if x > 30.0 else math.log(math.expm1(x))
    return log_m_minus_one - LN2


def dt_error(batch: SampleBatch, log2_M: float) -> ErrorEstimate:
    """
    DT error bound E[exp(-[T - log((M - 1)/2)]^+)] for M = 2^log2_M.

    Nondecreasing in M on a fixed batch. M <= 1 gives 0 with the degenerate flag.
    """
    if log2_M <= 0.0:
        return ErrorEstimate(value=0.0, stderr=0.0, degenerate=True)
    tau = dt_threshold(log2_M)
    terms = np.exp(-np.maximum(batch.sums - tau, 0.0))
    return ErrorEstimate(value=float(np.mean(terms)), stderr=float(np.std(terms, ddof=1) / math.sqrt(batch.count)))


def _largest_feasible_log2M(feasible: Callable[[float], bool], upper: float) -> Tuple[float, bool]:
    """Largest log2(M) in [1, upper] with feasible(log2 M), by bisection; (0, False) when M = 2 fails"""
    if not feasible(1.0):
        return 0.0, False
    if feasible(upper):
        return upper, True
    lo, hi = 1.0, upper
    while hi - lo > LOG2M_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo, True


def _dt_search(batch: SampleBatch, epsilon: float, kind: BoundKind, confidence: float, n_p: int) -> BoundResult:
    _check_epsilon(epsilon)
    z = confidence_z(confidence)
    n = batch.blocklength
    upper = n * math.log2(1.0 + batch.params.rho) + LOG2M_HEADROOM

    log2_M_ucb, ok = _largest_feasible_log2M(lambda m: dt_error(batch, m).upper(z) <= epsilon, upper)
    flags = [ResultFlag.CONTINUOUS_LOG2M]
    if not ok:
        logger.info(f"{kind.value}: even M=2 violates epsilon={epsilon:g} at {batch.params.label()}")
        flags.append(ResultFlag.INFEASIBLE)
        # falls back to the single codeword M = 1, whose threshold is degenerate
        if dt_error(batch, 0.0).degenerate:
            flags.append(ResultFlag.DEGENERATE_THRESHOLD)
        return BoundResult(kind=kind, rate_bpcu=0.0, epsilon=epsilon, log2_M_star=0.0, n_p=n_p, blocklength=n, flags=tuple(flags))

    log2_M_point, _ = _largest_feasible_log2M(lambda m: dt_error(batch, m).value <= epsilon, upper)
    stderr_rate = abs(log2_M_point - log2_M_ucb) / (n * z)
    logger.debug(f"{kind.value}: log2 M* = {log2_M_ucb:.4f} (point estimate {log2_M_point:.4f}) at {batch.params.label()}")
    return BoundResult(kind=kind, rate_bpcu=log2_M_ucb / n, epsilon=epsilon, stderr_rate=stderr_rate, log2_M_star=log2_M_ucb, n_p=n_p, blocklength=n, flags=tuple(flags))


def dt_max_rate(batch: SampleBatch, epsilon: float, confidence: float = DEFAULT_CONFIDENCE) -> BoundResult:
    """
    Largest rate whose DT error upper confidence bound is at most epsilon.

    log2(M) is searched as a real number on [0, n log2(1 + rho) + 64] on the
    fixed batch. If M = 2 already violates epsilon, the rate is 0 (M = 1) and the
    result is flagged infeasible with a degenerate threshold.
    """
    return _dt_search(batch, epsilon, BoundKind.DT, confidence, n_p=0)


def pilot_dt_max_rate(batch: SampleBatch, epsilon: float, pilots: PilotConfig, confidence: float = DEFAULT_CONFIDENCE) -> BoundResult:
    """
    DT rate for pilot-assisted transmission.

    The batch must come from the pilot-conditioned sampler with the same n_p.
    The rate is still divided by the full blocklength, so pilot overhead is charged.
    """
    if batch.n_p != pilots.n_p:
        raise UsageError(f"Batch was drawn with n_p={batch.n_p}, pilots specify n_p={pilots.n_p}")
    return _dt_search(batch, epsilon, BoundKind.PILOT_DT, confidence, n_p=pilots.n_p)


def converse_rate(batch: SampleBatch, epsilon: float, confidence: float = DEFAULT_CONFIDENCE) -> BoundResult:
    """
    Min-max converse inf_{lambda >= 0} (lambda - log[Pr{T <= lambda} - epsilon]^+) / (n ln 2).

    The empirical CDF is piecewise constant, so lambda ranges over 0 and the
    nonnegative sample values. The CDF is replaced by its one-sided
    Clopper-Pearson lower confidence bound before subtracting epsilon;
    nonpositive margins are excluded. Without any valid margin the rate is
    +inf, flagged as insufficient samples.
    """
    _check_epsilon(epsilon)
    if not (0.0 < confidence < 1.0):
        raise DomainError(f"Confidence level must lie in (0, 1), got {confidence}")
    n = batch.blocklength
    count = batch.count

    ordered = np.sort(batch.sums)
    candidates = np.concatenate(([0.0], ordered[ordered >= 0.0]))
    hits = np.searchsorted(ordered, candidates, side="right")
    cdf = hits / count
    cdf_se = np.sqrt(cdf * (1.0 - cdf) / count)
    cdf_lower = np.where(hits > 0, beta.ppf(1.0 - confidence, np.maximum(hits, 1), count - hits + 1), 0.0)
    margin = cdf_lower - epsilon

    valid = margin > 0.0
    flags = (ResultFlag.STATISTICAL_CDF,)
    if not np.any(valid):
        logger.warning(f"converse: empirical CDF never exceeds epsilon={epsilon:g} with margin at {batch.params.label()} ({count} samples)")
        return BoundResult(kind=BoundKind.CONVERSE, rate_bpcu=math.inf, epsilon=epsilon, blocklength=n, flags=flags + (ResultFlag.INSUFFICIENT_SAMPLES,))

    objective = np.full(candidates.shape, np.inf)
    objective[valid] = (candidates[valid] - np.log(margin[valid])) / (n * LN2)
    best = int(np.argmin(objective))
    stderr_rate = float(cdf_se[best] / (margin[best] * n * LN2))
    return BoundResult(
        kind=BoundKind.CONVERSE,
        rate_bpcu=float(objective[best]),
        epsilon=epsilon,
        stderr_rate=stderr_rate,
        lambda_star=float(candidates[best]),
        blocklength=n,
        flags=flags,
    )


def normal_approx(rho: float, n: int, epsilon: float) -> BoundResult:
    """AWGN normal approximation (C - sqrt(V/n) Q^-1(epsilon)) / ln 2, floored at zero"""
    _check_epsilon(epsilon)
    if n < 1:
        raise DomainError(f"Blocklength must be positive, got {n}")
    rate = (awgn_capacity(rho) - math.sqrt(awgn_dispersion(rho) / n) * q_inv(epsilon)) / LN2
    return BoundResult(kind=BoundKind.NORMAL_APPROX, rate_bpcu=max(0.0, rate), epsilon=epsilon, blocklength=n)
