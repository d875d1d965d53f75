"""
Shell-code output density and information-density sampling.
"""

from .output_pdf import GIntegralArgs, log_G, log_g_array, log_g_rayleigh, log_integrand, log_output_pdf
from .sampler import (
    InfoDensitySample,
    PilotDraws,
    PilotEffectiveParams,
    draw_estimate,
    pilot_effective_params,
    sample_info_density,
    sample_info_density_batch,
    sample_pilot_info_density,
    sample_pilot_info_density_batch,
)

__all__ = [
    "GIntegralArgs",
    "log_G",
    "log_g_array",
    "log_g_rayleigh",
    "log_integrand",
    "log_output_pdf",
    "InfoDensitySample",
    "PilotDraws",
    "PilotEffectiveParams",
    "draw_estimate",
    "pilot_effective_params",
    "sample_info_density",
    "sample_info_density_batch",
    "sample_pilot_info_density",
    "sample_pilot_info_density_batch",
]
