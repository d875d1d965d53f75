"""
Bound Domain Models.

Value objects shared by the bound evaluators: the kinds of bound, the batch of
information-density sums a bound is computed from, and the results.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..core.exceptions import UsageError
from ..model.channel import ChannelParams


class BoundKind(Enum):
    """Supported rate bounds"""

    DT = "dt"
    CONVERSE = "converse"
    PILOT_DT = "pilot-dt"
    NORMAL_APPROX = "normal-approx"

    @property
    def achievability(self) -> bool:
        return self in (BoundKind.DT, BoundKind.PILOT_DT)

    @property
    def needs_samples(self) -> bool:
        return self is not BoundKind.NORMAL_APPROX

    @classmethod
    def parse(cls, value: str) -> "BoundKind":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise UsageError(f"Unknown bound '{value}'; choose from {[k.value for k in cls]}") from None


class ResultFlag(Enum):
    """Metadata attached to a bound result"""

    CONTINUOUS_LOG2M = "continuous_log2M"
    STATISTICAL_CDF = "statistical_cdf"
    INFEASIBLE = "infeasible"
    INSUFFICIENT_SAMPLES = "insufficient_samples"
    DEGENERATE_THRESHOLD = "degenerate_threshold"


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """I.i.d. realizations of the summed information density over ell blocks (nats)"""

    sums: NDArray[np.float64]
    params: ChannelParams
    master_seed: int = 0
    n_p: int = 0

    def __post_init__(self):
        sums = np.asarray(self.sums, dtype=np.float64).ravel()
        if sums.size < 2:
            raise UsageError(f"A sample batch needs at least 2 entries, got {sums.size}")
        if not np.all(np.isfinite(sums)):
            raise UsageError("Sample batch contains non-finite entries")
        sums.setflags(write=False)
        object.__setattr__(self, "sums", sums)

    @property
    def count(self) -> int:
        return int(self.sums.size)

    @property
    def blocklength(self) -> int:
        return self.params.n


@dataclass(frozen=True)
class ErrorEstimate:
    """Monte-Carlo estimate of an error probability"""

    value: float
    stderr: float
    degenerate: bool = False

    def upper(self, z: float) -> float:
        return self.value + z * self.stderr


@dataclass(frozen=True)
class BoundResult:
    """One evaluated rate bound, in bits per channel use"""

    kind: BoundKind
    rate_bpcu: float
    epsilon: float
    stderr_rate: float = 0.0
    lambda_star: Optional[float] = None
    log2_M_star: Optional[float] = None
    n_p: Optional[int] = None
    blocklength: Optional[int] = None
    flags: Tuple[ResultFlag, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if math.isnan(self.rate_bpcu) or self.rate_bpcu < 0.0:
            raise ValueError(f"Rate must be nonnegative, got {self.rate_bpcu}")
        if self.stderr_rate < 0.0:
            raise ValueError(f"Standard error must be nonnegative, got {self.stderr_rate}")
        if self.kind.achievability and self.log2_M_star is not None and self.blocklength:
            if not math.isclose(self.rate_bpcu, self.log2_M_star / self.blocklength, rel_tol=1e-12, abs_tol=1e-15):
                raise ValueError("Achievability rate must equal log2_M_star / n")

    @property
    def aux(self) -> Optional[float]:
        """lambda* for the converse, log2 M* for achievability"""
        return self.lambda_star if self.kind is BoundKind.CONVERSE else self.log2_M_star

    def flag_names(self) -> Tuple[str, ...]:
        return tuple(flag.value for flag in self.flags)
