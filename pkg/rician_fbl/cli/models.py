"""
Data models for the command-line front end.

This module defines the pydantic model of a fully resolved command line and
its conversion into the engine's SweepSpec and the runtime Config.
"""

import os
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..bounds.models import BoundKind
from ..core.config import Config
from ..core.logging_config import verbosity_to_level
from ..engine.models import ALL_DIVISORS, SweepSpec


class CliConfig(BaseModel):
    """Sweep, output and logging settings after presets and flags are merged"""

    model_config = ConfigDict(extra="forbid")

    preset: Literal["fig1", "fig2", "fig3", "none"] = "none"
    n_total: int = 168
    ell_values: Union[List[int], Literal["all"]] = ALL_DIVISORS
    kappa_values: List[float] = Field(default_factory=lambda: [0.0])
    rho_db: float = 6.0
    epsilon: float = 1e-3
    np_values: List[int] = Field(default_factory=lambda: [0])
    bounds: List[str] = Field(default_factory=lambda: [BoundKind.DT.value, BoundKind.CONVERSE.value])
    samples: int = 100_000
    seed: int = 0
    out: str = "-"
    format: Literal["csv", "tsv"] = "csv"
    tolerance: float = 1e-9
    verbosity: int = 0
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1)
    log_file: Optional[str] = None

    @field_validator("bounds")
    @classmethod
    def validate_bounds(cls, value: List[str]) -> List[str]:
        kinds = [BoundKind.parse(name).value for name in value]
        if not kinds:
            raise ValueError("at least one bound is required")
        return list(dict.fromkeys(kinds))

    @field_validator("epsilon", "tolerance")
    @classmethod
    def validate_probability(cls, value: float) -> float:
        if not 0.0 < value < 1.0:
            raise ValueError(f"must lie in (0, 1), got {value}")
        return value

    @field_validator("samples", "workers")
    @classmethod
    def validate_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be positive, got {value}")
        return value

    @model_validator(mode="after")
    def validate_pilots(self) -> "CliConfig":
        if any(n_p > 0 for n_p in self.np_values) and BoundKind.PILOT_DT.value not in self.bounds:
            raise ValueError(f"pilot counts {self.np_values} need the pilot-dt bound, but bounds are {self.bounds}")
        return self

    @property
    def bound_kinds(self) -> List[BoundKind]:
        return [BoundKind(name) for name in self.bounds]

    def to_sweep_spec(self) -> SweepSpec:
        """Raises UsageError when the grid is inconsistent (e.g. ell not dividing n)"""
        return SweepSpec(
            n_total=self.n_total,
            ell_values=self.ell_values if isinstance(self.ell_values, str) else list(self.ell_values),
            kappa_values=list(self.kappa_values),
            rho_db=self.rho_db,
            epsilon=self.epsilon,
            np_values=list(self.np_values),
            bounds=self.bound_kinds,
            samples=self.samples,
            master_seed=self.seed,
        )

    def to_config(self) -> Config:
        config = Config.from_preset(self.preset)
        config.update_section("quadrature", relative_tolerance=self.tolerance)
        config.update_section("monte_carlo", samples=self.samples, master_seed=self.seed, workers=self.workers)
        config.update_section("output", path=self.out, format=self.format)
        config.update_section("system", log_level=verbosity_to_level(self.verbosity), log_file=self.log_file)
        return config
