"""
Log-domain special functions and half-line quadrature.
"""

from .quadrature import QuadratureSpec, gauss_legendre_rule, integrate_halfline_log, integrate_log_panels
from .special import LogValue, bessel_i_ratio, log_bessel_i, log_scaled_bessel_i, log_sum_exp, q_function, q_inv

__all__ = [
    "QuadratureSpec",
    "gauss_legendre_rule",
    "integrate_halfline_log",
    "integrate_log_panels",
    "LogValue",
    "bessel_i_ratio",
    "log_bessel_i",
    "log_scaled_bessel_i",
    "log_sum_exp",
    "q_function",
    "q_inv",
]
