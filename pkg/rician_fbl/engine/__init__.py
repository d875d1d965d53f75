"""
Sweep orchestration: expansion, seeded batch generation and row assembly.
"""

from .models import ALL_DIVISORS, ParameterPoint, ResultRow, SweepSpec
from .seeding import BatchGenerator, complex_normals
from .sweep import SweepEngine, best_pilot_count, expand, optimal_ell, run

__all__ = ["ALL_DIVISORS", "ParameterPoint", "ResultRow", "SweepSpec", "BatchGenerator", "complex_normals", "SweepEngine", "best_pilot_count", "expand", "optimal_ell", "run"]
