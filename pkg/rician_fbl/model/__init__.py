"""
Channel, pilot and code parameterization.
"""

from .channel import KAPPA_CAP, ChannelParams, CodeSpec, PilotConfig, coherence_length, db_to_linear, derive_params, divisors

__all__ = ["KAPPA_CAP", "ChannelParams", "CodeSpec", "PilotConfig", "coherence_length", "db_to_linear", "derive_params", "divisors"]
