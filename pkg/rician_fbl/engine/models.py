"""
Data models for sweeps.

SweepSpec and ParameterPoint are plain value objects; ResultRow is the
pydantic model of one emitted CSV row.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Union

from pydantic import BaseModel, Field

from ..bounds.models import BoundKind, BoundResult
from ..core.exceptions import UsageError
from ..model.channel import ChannelParams, coherence_length, divisors

ALL_DIVISORS = "all"


@dataclass(frozen=True)
class SweepSpec:
    """Grid over ell, kappa and n_p, with the bounds to evaluate at each point"""

    n_total: int
    ell_values: Union[List[int], str]
    kappa_values: List[float]
    rho_db: float
    epsilon: float
    np_values: List[int] = field(default_factory=lambda: [0])
    bounds: List[BoundKind] = field(default_factory=lambda: [BoundKind.DT, BoundKind.CONVERSE])
    samples: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        if self.n_total < 2:
            raise UsageError(f"Blocklength must be at least 2, got n={self.n_total}")
        if isinstance(self.ell_values, str):
            if self.ell_values != ALL_DIVISORS:
                raise UsageError(f"ell must be a list of divisors or '{ALL_DIVISORS}', got '{self.ell_values}'")
        else:
            for ell in self.ell_values:
                coherence_length(self.n_total, ell)
        if not self.kappa_values:
            raise UsageError("At least one Rician factor is required")
        if not math.isfinite(self.rho_db):
            raise UsageError(f"SNR in dB must be finite, got {self.rho_db}")
        if not (0.0 < self.epsilon < 1.0):
            raise UsageError(f"Target error must lie in (0, 1), got {self.epsilon}")
        if not self.np_values or any(n_p < 0 for n_p in self.np_values):
            raise UsageError(f"Pilot counts must be nonnegative, got {self.np_values}")
        if not self.bounds:
            raise UsageError("At least one bound is required")
        if self.samples < 2:
            raise UsageError(f"At least 2 samples are required, got {self.samples}")
        if not 0 <= self.master_seed < 2**64:
            raise UsageError(f"Master seed must be a 64-bit unsigned integer, got {self.master_seed}")

    def resolved_ells(self) -> List[int]:
        """Selected diversity orders with n_c >= 2, ascending"""
        values = divisors(self.n_total) if isinstance(self.ell_values, str) else self.ell_values
        return sorted({ell for ell in values if self.n_total // ell >= 2})

    @property
    def needs_samples(self) -> bool:
        return any(kind.needs_samples for kind in self.bounds)


@dataclass(frozen=True)
class ParameterPoint:
    """One (ell, kappa, n_p) grid point; channel_index identifies the (ell, kappa) pair"""

    index: int
    channel_index: int
    params: ChannelParams
    n_p: int
    skip_reason: Optional[str] = None

    @property
    def ell(self) -> int:
        return self.params.ell

    @property
    def n_c(self) -> int:
        return self.params.n_c

    @property
    def kappa(self) -> float:
        return self.params.kappa

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None

    def label(self) -> str:
        return f"{self.params.label()} n_p={self.n_p}"


class ResultRow(BaseModel):
    """One emitted row: a parameter point evaluated with one bound"""

    ell: int
    n_c: int
    kappa: float
    n_p: int
    bound: str
    rate_bpcu: float
    stderr: float
    aux: Optional[float] = None
    samples: int
    seed: int
    flags: List[str] = Field(default_factory=list)
    error: Optional[str] = None

    @classmethod
    def from_result(cls, point: ParameterPoint, result: BoundResult, samples: int, seed: int) -> "ResultRow":
        return cls(
            ell=point.ell,
            n_c=point.n_c,
            kappa=point.kappa,
            n_p=point.n_p,
            bound=result.kind.value,
            rate_bpcu=result.rate_bpcu,
            stderr=result.stderr_rate,
            aux=result.aux,
            samples=samples if result.kind.needs_samples else 0,
            seed=seed,
            flags=list(result.flag_names()),
        )

    @classmethod
    def failed(cls, point: ParameterPoint, kind: BoundKind, samples: int, seed: int, error: str) -> "ResultRow":
        return cls(
            ell=point.ell,
            n_c=point.n_c,
            kappa=point.kappa,
            n_p=point.n_p,
            bound=kind.value,
            rate_bpcu=math.nan,
            stderr=math.nan,
            samples=samples if kind.needs_samples else 0,
            seed=seed,
            error=error,
        )
