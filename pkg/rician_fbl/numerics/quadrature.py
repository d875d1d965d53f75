"""
Quadrature of unimodal log-integrands on the half-line.

The scalar integrator locates the mode with a bounded Brent search, widening
the bracket while the maximum sits at its upper end, and then sums
Gauss-Legendre panels outward from it, accumulating in the log domain. The
batch integrator evaluates many integrals at once on fixed panels around
per-row modes supplied by the caller.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from ..core.exceptions import ConvergenceError, UsageError
from .special import LogValue

logger = logging.getLogger(__name__)

_MAX_BRACKET_DOUBLINGS = 64
_MODE_XATOL = 1e-12
_MODE_EDGE = 1e-6
_WORST_OBJECTIVE = 1e300
_MAX_SCALE_STEPS = 400
_PANEL_GROWTH = 1.5


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance, work limit and initial mode bracket for one integral"""

    relative_tolerance: float = 1e-9
    max_subdivisions: int = 2**15
    mode_bracket: Tuple[float, float] = (0.0, 1.0)
    gauss_order: int = 16

    def __post_init__(self):
        if not (0.0 < self.relative_tolerance < 1.0):
            raise UsageError(f"relative tolerance must lie in (0, 1), got {self.relative_tolerance}")
        if self.max_subdivisions <= 0:
            raise UsageError(f"max subdivisions must be positive, got {self.max_subdivisions}")
        lo, hi = self.mode_bracket
        if lo < 0 or hi < 0 or not lo < hi:
            raise UsageError(f"mode bracket must be nonnegative and ordered, got {self.mode_bracket}")
        if self.gauss_order < 2:
            raise UsageError(f"Gauss order must be at least 2, got {self.gauss_order}")

    def with_bracket(self, lo: float, hi: float) -> "QuadratureSpec":
        return replace(self, mode_bracket=(float(lo), float(hi)))


@lru_cache(maxsize=32)
def gauss_legendre_rule(order: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Nodes on [-1, 1] and log-weights of the Gauss-Legendre rule"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    log_weights = np.log(weights)
    log_weights.setflags(write=False)
    return nodes, log_weights


class _HalfLineIntegrator:
    """One evaluation of integrate_halfline_log"""

    def __init__(self, log_integrand: Callable, spec: QuadratureSpec, vectorized: bool):
        self.log_integrand = log_integrand
        self.spec = spec
        self.vectorized = vectorized
        self.nodes, self.log_weights = gauss_legendre_rule(spec.gauss_order)
        self.subdivisions = 0
        self.log_tol = math.log(spec.relative_tolerance)

    def evaluate(self, z) -> NDArray[np.float64]:
        z = np.asarray(z, dtype=np.float64)
        if self.vectorized:
            values = np.asarray(self.log_integrand(z), dtype=np.float64)
        else:
            values = np.array([self.log_integrand(float(v)) for v in z.ravel()], dtype=np.float64).reshape(z.shape)
        return np.where(np.isnan(values), -np.inf, values)

    def value(self, z: float) -> float:
        return float(self.evaluate(np.array([z]))[0])

    # -- mode ---------------------------------------------------------------

    def objective(self, z: float) -> float:
        """Negated log-integrand, finite everywhere for the minimizer"""
        return min(-self.value(z), _WORST_OBJECTIVE)

    def locate_mode(self) -> float:
        lo, hi = self.spec.mode_bracket
        for _ in range(_MAX_BRACKET_DOUBLINGS):
            found = minimize_scalar(self.objective, bounds=(lo, hi), method="bounded", options={"xatol": _MODE_XATOL * (hi - lo)})
            mode = float(found.x)
            # a maximum pressed against the upper end means the bracket is too short
            if hi - mode > _MODE_EDGE * hi:
                return mode
            lo, hi = mode * 0.5, hi * 2.0
        raise ConvergenceError(
            "Mode of the log-integrand not bracketed",
            {"bracket": self.spec.mode_bracket, "last_bracket": (lo, hi), "doublings": _MAX_BRACKET_DOUBLINGS},
        )

    def unit_scale(self, mode: float, peak: float) -> float:
        """Distance from the mode at which the log-integrand has dropped by about one nat"""
        lo, hi = self.spec.mode_bracket
        step = max((hi - lo) * 1e-3, mode * 1e-3, 1e-300)
        if self.value(mode + step) < peak - 1.0:
            for _ in range(_MAX_SCALE_STEPS):
                step *= 0.5
                if self.value(mode + step) >= peak - 1.0:
                    return step
        else:
            for _ in range(_MAX_SCALE_STEPS):
                step *= 2.0
                if self.value(mode + step) < peak - 1.0:
                    return step
        raise ConvergenceError("Could not determine the integrand width", {"mode": mode, "peak": peak, "last_step": step})

    # -- panels -------------------------------------------------------------

    def panel(self, a: float, b: float) -> float:
        half = 0.5 * (b - a)
        z = a + half * (self.nodes + 1.0)
        return float(logsumexp(self.evaluate(z) + self.log_weights)) + math.log(half)

    def adaptive_panel(self, a: float, b: float, whole: float) -> float:
        self.subdivisions += 1
        if self.subdivisions > self.spec.max_subdivisions:
            raise ConvergenceError(
                "Quadrature tolerance not met within the subdivision limit",
                {"max_subdivisions": self.spec.max_subdivisions, "interval": (a, b)},
            )
        mid = 0.5 * (a + b)
        left, right = self.panel(a, mid), self.panel(mid, b)
        halves = float(np.logaddexp(left, right))
        if halves == -np.inf or abs(math.expm1(whole - halves)) <= self.spec.relative_tolerance:
            return halves
        return float(np.logaddexp(self.adaptive_panel(a, mid, left), self.adaptive_panel(mid, b, right)))

    def integrate(self) -> LogValue:
        mode = self.locate_mode()
        peak = self.value(mode)
        if not np.isfinite(peak):
            raise ConvergenceError("Log-integrand is not finite at its mode", {"mode": mode, "value": peak})

        width = self.unit_scale(mode, peak)
        total = -np.inf

        # Right of the mode
        x, h, small_run = mode, width, 0
        while small_run < 2:
            contribution = self.adaptive_panel(x, x + h, self.panel(x, x + h))
            total = float(np.logaddexp(total, contribution))
            small_run = small_run + 1 if contribution < self.log_tol + total else 0
            x, h = x + h, h * _PANEL_GROWTH

        # Left of the mode, down to the origin
        x, h = mode, width
        while x > 0.0:
            a = max(0.0, x - h)
            contribution = self.adaptive_panel(a, x, self.panel(a, x))
            total = float(np.logaddexp(total, contribution))
            if contribution < self.log_tol + total:
                break
            x, h = a, h * _PANEL_GROWTH

        logger.debug(f"Half-line quadrature: mode={mode:.6g}, width={width:.3g}, panels={self.subdivisions}, log value={total:.12g}")
        return total


def integrate_halfline_log(log_integrand: Callable, spec: QuadratureSpec = QuadratureSpec(), vectorized: bool = False) -> LogValue:
    """
    log of the integral over (0, inf) of exp(log_integrand(z)).

    The integrand must be continuous, unimodal in the log and decay at least
    exponentially. With ``vectorized=True`` the integrand receives numpy arrays.

    Raises:
        ConvergenceError: mode not bracketed after expansion, or tolerance not
            met within ``spec.max_subdivisions`` panels.
    """
    return _HalfLineIntegrator(log_integrand, spec, vectorized).integrate()


def integrate_log_panels(log_integrand: Callable[[NDArray[np.float64]], NDArray[np.float64]], lower: NDArray[np.float64], mode: NDArray[np.float64], upper: NDArray[np.float64], panels: int, order: int) -> NDArray[np.float64]:
    """
    Row-wise log-integrals over [lower, upper] split at ``mode``.

    Each side is cut into ``panels`` equal panels with an ``order``-point
    Gauss-Legendre rule. ``log_integrand`` receives an array of shape
    (rows, 2 * panels * order) and must return the same shape.
    """
    nodes, log_weights = gauss_legendre_rule(order)
    # Panel edges as fractions of each side: (panels + 1,)
    edges = np.linspace(0.0, 1.0, panels + 1)
    frac_mid = 0.5 * (edges[:-1] + edges[1:])
    frac_half = 0.5 * (edges[1] - edges[0])
    # Fractions of each node within a side: (panels * order,)
    fractions = (frac_mid[:, None] + frac_half * nodes[None, :]).ravel()

    left_len = (mode - lower)[:, None]
    right_len = (upper - mode)[:, None]
    z = np.concatenate([lower[:, None] + left_len * fractions[None, :], mode[:, None] + right_len * fractions[None, :]], axis=1)

    values = np.asarray(log_integrand(z), dtype=np.float64)
    values = np.where(np.isnan(values), -np.inf, values)

    k = panels * order
    tiled_weights = np.tile(log_weights, panels)
    with np.errstate(divide="ignore"):
        log_left = logsumexp(values[:, :k] + tiled_weights, axis=1) + np.log(left_len[:, 0] * frac_half)
        log_right = logsumexp(values[:, k:] + tiled_weights, axis=1) + np.log(right_len[:, 0] * frac_half)
    return np.logaddexp(log_left, log_right)
