"""
Configuration management for the Rician finite-blocklength bounds toolkit.

This module holds the numerical, Monte-Carlo, output and system settings, and
the figure presets that fully determine a sweep. Configuration is assembled from
defaults, an optional preset and command-line flags; no configuration file is read.
"""

import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from .exceptions import UsageError

# Axis ticks shared by every figure: 2 <= ell <= 84 for n = 168
FIGURE_ELL_TICKS = [2, 4, 7, 14, 21, 28, 42, 84]


@dataclass
class QuadratureConfig:
    """Quadrature settings for the shell-code output density integral"""

    relative_tolerance: float = 1e-9
    max_subdivisions: int = 2**15
    gauss_order: int = 16  # nodes per panel in the scalar integrator
    batch_panels: int = 4  # panels per side of the mode in the vectorized integrator
    batch_order: int = 16  # nodes per panel in the vectorized integrator


@dataclass
class MonteCarloConfig:
    """Monte-Carlo settings"""

    samples: int = 100_000
    master_seed: int = 0
    chunk_size: int = 4096  # samples per work item; does not affect the drawn values
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    confidence: float = 0.95


@dataclass
class OutputConfig:
    """CSV output settings"""

    path: str = "-"
    format: str = "csv"  # csv or tsv
    significant_digits: int = 9


@dataclass
class SystemConfig:
    """System-wide settings"""

    log_level: str = "WARNING"
    log_file: Optional[str] = None
    show_progress: bool = True


@dataclass(frozen=True)
class FigurePreset:
    """Sweep values behind one rate-versus-diversity figure"""

    name: str
    n_total: int
    ell_values: List[int]
    kappa_values: List[float]
    rho_db: float
    epsilon: float
    np_values: List[int]
    bounds: List[str]


PRESETS: Dict[str, FigurePreset] = {
    "fig1": FigurePreset(
        name="fig1",
        n_total=168,
        ell_values=list(FIGURE_ELL_TICKS),
        kappa_values=[0.0, 1.0, 10.0, 100.0, 1000.0],
        rho_db=6.0,
        epsilon=1e-3,
        np_values=[0],
        bounds=["dt", "converse", "normal-approx"],
    ),
    "fig2": FigurePreset(
        name="fig2",
        n_total=168,
        ell_values=list(FIGURE_ELL_TICKS),
        kappa_values=[0.0],
        rho_db=6.0,
        epsilon=1e-3,
        np_values=[0, 1, 2, 4, 6, 8],
        bounds=["pilot-dt", "converse"],
    ),
    "fig3": FigurePreset(
        name="fig3",
        n_total=168,
        ell_values=list(FIGURE_ELL_TICKS),
        kappa_values=[10.0],
        rho_db=6.0,
        epsilon=1e-3,
        np_values=[0, 1, 2, 4, 6, 8],
        bounds=["pilot-dt", "converse"],
    ),
}


def get_preset(name: str) -> FigurePreset:
    """Look up a figure preset by name"""
    try:
        return PRESETS[name]
    except KeyError:
        raise UsageError(f"Unknown preset '{name}'; choose one of {sorted(PRESETS)} or 'none'") from None


class Config:
    """Main configuration manager"""

    def __init__(self, preset: Optional[str] = None):
        self.logger = logging.getLogger(__name__)

        self.quadrature = QuadratureConfig()
        self.monte_carlo = MonteCarloConfig()
        self.output = OutputConfig()
        self.system = SystemConfig()

        self.preset: Optional[FigurePreset] = None
        if preset and preset != "none":
            self.preset = get_preset(preset)
            self.logger.debug(f"Using preset {preset}")

    @classmethod
    def from_preset(cls, name: Optional[str]) -> "Config":
        return cls(preset=name)

    def update_section(self, section: str, **kwargs) -> None:
        """Override fields of one configuration section"""
        target = getattr(self, section, None)
        if target is None:
            raise UsageError(f"Unknown configuration section: {section}")
        for key, value in kwargs.items():
            if value is None:
                continue
            if not hasattr(target, key):
                raise UsageError(f"Unknown setting {section}.{key}")
            setattr(target, key, value)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            "preset": asdict(self.preset) if self.preset else None,
            "quadrature": asdict(self.quadrature),
            "monte_carlo": asdict(self.monte_carlo),
            "output": asdict(self.output),
            "system": asdict(self.system),
        }
