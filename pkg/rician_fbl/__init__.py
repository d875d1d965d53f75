"""
Finite-blocklength bounds for SISO Rician block-fading channels.

Nonasymptotic achievability (dependence-testing) and min-max converse bounds
on the maximum coding rate without a priori channel knowledge, a
pilot-assisted achievability variant and the AWGN normal approximation,
evaluated over sweeps of diversity order, Rician factor and pilot count.
"""

__version__ = "0.1.0"
