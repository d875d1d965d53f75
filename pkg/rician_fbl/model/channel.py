"""
Channel and code parameterization for SISO Rician block fading.

This module defines immutable value objects for the channel (Rician factor,
SNR, coherence block length, diversity branches), the pilot configuration and
the code (codebook size, target error), together with helpers that derive a
channel point from the total blocklength.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from ..core.exceptions import DomainError, UsageError

logger = logging.getLogger(__name__)

# Rician factors above this make sigma_H2 too small for the output-density integral
KAPPA_CAP = 1e6


def divisors(n: int) -> List[int]:
    """All positive divisors of n in ascending order"""
    if n < 1:
        raise UsageError(f"Blocklength must be positive, got {n}")
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def coherence_length(n_total: int, ell: int) -> int:
    """n_c for a codeword of n_total channel uses spread over ell blocks"""
    if ell < 1 or n_total % ell != 0:
        raise UsageError(f"ell={ell} does not divide n={n_total}; valid values are {divisors(n_total)}")
    return n_total // ell


def db_to_linear(rho_db: float) -> float:
    if not math.isfinite(rho_db):
        raise DomainError(f"SNR in dB must be finite, got {rho_db}")
    return 10.0 ** (rho_db / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    """One Rician block-fading channel point"""

    kappa: float
    rho: float
    n_c: int
    ell: int

    def __post_init__(self):
        if not (self.kappa >= 0.0) or math.isinf(self.kappa):
            raise DomainError(f"Rician factor must be finite and nonnegative, got {self.kappa}")
        if self.kappa > KAPPA_CAP:
            raise DomainError(f"Rician factor {self.kappa} exceeds the supported maximum {KAPPA_CAP:g}")
        if not (self.rho > 0.0) or math.isinf(self.rho):
            raise DomainError(f"SNR must be positive and finite, got {self.rho}")
        if self.n_c < 2:
            raise UsageError(f"Coherence block must hold at least 2 channel uses, got n_c={self.n_c}")
        if self.ell < 1:
            raise UsageError(f"Number of diversity branches must be positive, got ell={self.ell}")

    @property
    def mu_H(self) -> float:
        """Line-of-sight amplitude"""
        return math.sqrt(self.kappa / (1.0 + self.kappa))

    @property
    def sigma_H2(self) -> float:
        """Variance of the scattered component"""
        return 1.0 / (1.0 + self.kappa)

    @property
    def n(self) -> int:
        """Total blocklength"""
        return self.n_c * self.ell

    @property
    def rho_db(self) -> float:
        return 10.0 * math.log10(self.rho)

    def label(self) -> str:
        return f"ell={self.ell} n_c={self.n_c} kappa={self.kappa:g}"


@dataclass(frozen=True)
class PilotConfig:
    """Pilot symbols per coherence block; n_p = 0 is noncoherent transmission"""

    n_p: int
    n_c: int
    rho: float

    def __post_init__(self):
        if self.n_p < 0:
            raise UsageError(f"Pilot count must be nonnegative, got n_p={self.n_p}")
        if self.n_p > 0 and self.n_p > self.n_c - 2:
            raise UsageError(f"n_p={self.n_p} leaves fewer than 2 data symbols in a block of n_c={self.n_c}")
        if not (self.rho > 0.0):
            raise DomainError(f"SNR must be positive, got {self.rho}")

    @classmethod
    def for_channel(cls, params: ChannelParams, n_p: int) -> "PilotConfig":
        return cls(n_p=n_p, n_c=params.n_c, rho=params.rho)

    @property
    def n_d(self) -> int:
        """Data symbols per block"""
        return self.n_c - self.n_p

    @property
    def sigma_e2(self) -> Optional[float]:
        """Channel-estimation error variance; None without pilots"""
        if self.n_p == 0:
            return None
        return 1.0 / (self.n_p * self.rho)

    @property
    def coherent(self) -> bool:
        return self.n_p > 0


@dataclass(frozen=True)
class CodeSpec:
    """Codebook size, target average error and blocklength"""

    log2_M: float
    epsilon: float
    blocklength: int

    def __post_init__(self):
        if not (self.log2_M > 0.0):
            raise DomainError(f"log2(M) must be positive, got {self.log2_M}")
        if not (0.0 < self.epsilon < 1.0):
            raise DomainError(f"Target error must lie in (0, 1), got {self.epsilon}")
        if self.blocklength < 1:
            raise UsageError(f"Blocklength must be positive, got {self.blocklength}")

    @property
    def rate(self) -> float:
        """Bits per channel use"""
        return self.log2_M / self.blocklength


def derive_params(kappa: float, rho_db: float, n_c: int, ell: int, n_total: Optional[int] = None) -> ChannelParams:
    """
    Build a ChannelParams from a dB SNR.

    Rician factors above KAPPA_CAP are clamped with a warning. When ``n_total``
    is given, ``n_c * ell`` must equal it.

    Raises:
        UsageError: ell does not divide n_total (the message lists the divisors),
            or n_c * ell differs from n_total.
    """
    if n_total is not None:
        expected = coherence_length(n_total, ell)
        if expected != n_c:
            raise UsageError(f"n_c={n_c} with ell={ell} gives n={n_c * ell}, expected n={n_total}")
    rho = db_to_linear(rho_db)
    if kappa > KAPPA_CAP:
        logger.warning(f"Rician factor {kappa:g} capped at {KAPPA_CAP:g}")
        kappa = KAPPA_CAP
    return ChannelParams(kappa=float(kappa), rho=rho, n_c=int(n_c), ell=int(ell))
