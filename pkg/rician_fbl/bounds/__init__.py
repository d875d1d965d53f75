"""
Achievability, converse and normal-approximation rate bounds.
"""

from .evaluators import awgn_capacity, awgn_dispersion, confidence_z, converse_rate, dt_error, dt_max_rate, dt_threshold, normal_approx, pilot_dt_max_rate
from .models import BoundKind, BoundResult, ErrorEstimate, ResultFlag, SampleBatch

__all__ = [
    "awgn_capacity",
    "awgn_dispersion",
    "confidence_z",
    "converse_rate",
    "dt_error",
    "dt_max_rate",
    "dt_threshold",
    "normal_approx",
    "pilot_dt_max_rate",
    "BoundKind",
    "BoundResult",
    "ErrorEstimate",
    "ResultFlag",
    "SampleBatch",
]
