"""
Sweep engine for the Rician finite-blocklength bounds toolkit.

This module expands a SweepSpec into parameter points, draws the sample
batches each point needs, evaluates the requested bounds and collects one
row per (point, bound). Bounds that do not depend on the pilot count are
computed once per (ell, kappa) pair and reused across n_p values. A failing
point becomes error rows; it never aborts the sweep.
"""

import logging
import math
import time
from typing import Any, Dict, List, Optional, Tuple

from ..bounds.evaluators import converse_rate, dt_max_rate, normal_approx, pilot_dt_max_rate
from ..bounds.models import BoundKind, BoundResult, SampleBatch
from ..core.config import Config
from ..core.events import EventSystem, EventType
from ..core.exceptions import DomainError, UsageError
from ..core.logging_config import get_error_tracker, get_performance_logger
from ..core.state_manager import PointStatus, SweepState
from ..model.channel import PilotConfig, derive_params
from .models import ParameterPoint, ResultRow, SweepSpec
from .seeding import BatchGenerator

logger = logging.getLogger(__name__)


def expand(spec: SweepSpec) -> List[ParameterPoint]:
    """
    Cartesian product of the sweep axes ordered by ell, then kappa, then n_p.

    Points whose pilot count leaves fewer than two data symbols are kept but
    marked as skipped.

    Raises:
        UsageError: the expansion is empty or a channel point is invalid.
    """
    points: List[ParameterPoint] = []
    channel_index = 0
    for ell in spec.resolved_ells():
        n_c = spec.n_total // ell
        for kappa in sorted(set(spec.kappa_values)):
            try:
                params = derive_params(kappa, spec.rho_db, n_c, ell, n_total=spec.n_total)
            except DomainError as e:
                raise UsageError(str(e)) from e
            for n_p in sorted(set(spec.np_values)):
                skip_reason = None
                if n_p > 0 and n_p > n_c - 2:
                    skip_reason = f"n_p={n_p} leaves fewer than 2 data symbols per block (n_c={n_c})"
                points.append(ParameterPoint(index=len(points), channel_index=channel_index, params=params, n_p=n_p, skip_reason=skip_reason))
            channel_index += 1

    if not points:
        raise UsageError(f"Sweep over n={spec.n_total} expands to no parameter points (every ell leaves n_c < 2)")
    return points


class SweepEngine:
    """Runs sweeps and keeps their results"""

    def __init__(self, config: Config, event_system: Optional[EventSystem] = None, state: Optional[SweepState] = None):
        self.logger = logging.getLogger(__name__)
        self.config = config
        self.event_system = event_system or EventSystem()
        self.state = state or SweepState()

        self.error_tracker = get_error_tracker("sweep")
        self.performance_logger = get_performance_logger("sweep")
        self.generator = BatchGenerator(config.monte_carlo, config.quadrature)

        self._channel_index: Optional[int] = None
        self._noncoherent_batch: Optional[SampleBatch] = None
        self._shared_results: Dict[BoundKind, BoundResult] = {}
        self._rows: List[ResultRow] = []

    def run(self, spec: SweepSpec) -> List[ResultRow]:
        """Evaluate every point of the sweep; rows come back in expansion order"""
        points = expand(spec)
        self._reset_channel(None)
        self.state.start()
        self.performance_logger.start_timer("sweep")
        self.event_system.publish(EventType.SWEEP_STARTED, "sweep_engine", {"points": len(points), "bounds": [k.value for k in spec.bounds]})
        self.logger.info(f"Sweep: {len(points)} point(s) x {len(spec.bounds)} bound(s), {spec.samples} samples, seed {spec.master_seed}")

        for point in points:
            self.state.register_point(point.index, point.label())
            self._run_point(spec, point)

        self._reset_channel(None)
        elapsed = self.performance_logger.end_timer("sweep")
        self.state.finish()
        self._rows = self.state.ordered_rows()
        self.event_system.publish(EventType.SWEEP_FINISHED, "sweep_engine", {"rows": len(self._rows), "seconds": elapsed})
        return list(self._rows)

    def _run_point(self, spec: SweepSpec, point: ParameterPoint) -> None:
        data = {"index": point.index, "label": point.label()}
        if point.skipped:
            self.error_tracker.log_warning(f"Skipping {point.label()}: {point.skip_reason}", "expand")
            self.state.store(point.index, [], PointStatus.SKIPPED, message=point.skip_reason)
            self.event_system.publish(EventType.POINT_SKIPPED, "sweep_engine", data)
            return

        self.event_system.publish(EventType.POINT_STARTED, "sweep_engine", data)
        if point.channel_index != self._channel_index:
            self._reset_channel(point.channel_index)

        timer = f"point_{point.index}"
        self.performance_logger.start_timer(timer)
        started = time.perf_counter()
        try:
            results = [self._evaluate(spec, point, kind) for kind in spec.bounds]
        except Exception as e:
            duration = time.perf_counter() - started
            self.performance_logger.end_timer(timer)
            self.error_tracker.log_error(e, "evaluate_point", {"ell": point.ell, "kappa": point.kappa, "n_p": point.n_p})
            rows = [ResultRow.failed(point, kind, spec.samples, spec.master_seed, f"{type(e).__name__}: {e}") for kind in spec.bounds]
            self.state.store(point.index, rows, PointStatus.FAILED, duration_seconds=duration, message=f"{type(e).__name__}: {e}")
            self.event_system.publish(EventType.POINT_FAILED, "sweep_engine", {**data, "error": str(e)})
            return

        duration = time.perf_counter() - started
        self.performance_logger.end_timer(timer)
        rows = [ResultRow.from_result(point, result, spec.samples, spec.master_seed) for result in results]
        flags = sorted({f"{result.kind.value}:{name}" for result in results for name in result.flag_names()})
        for flag in flags:
            self.logger.info(f"{point.label()} flagged {flag}")
        self.state.store(point.index, rows, PointStatus.COMPLETED, duration_seconds=duration, flags=flags)
        self.event_system.publish(EventType.POINT_COMPLETED, "sweep_engine", {**data, "seconds": duration, "rates": {r.bound: r.rate_bpcu for r in rows}})

    def _reset_channel(self, channel_index: Optional[int]) -> None:
        """Drop the per-(ell, kappa) caches when moving to another channel point"""
        self._channel_index = channel_index
        self._noncoherent_batch = None
        self._shared_results = {}

    def _noncoherent(self, spec: SweepSpec, point: ParameterPoint) -> SampleBatch:
        if self._noncoherent_batch is None:
            self._noncoherent_batch = self.generator.noncoherent(point.params, point.channel_index, samples=spec.samples, master_seed=spec.master_seed)
        return self._noncoherent_batch

    def _evaluate(self, spec: SweepSpec, point: ParameterPoint, kind: BoundKind) -> BoundResult:
        confidence = self.config.monte_carlo.confidence
        if kind is BoundKind.PILOT_DT:
            pilots = PilotConfig.for_channel(point.params, point.n_p)
            if pilots.coherent:
                batch = self.generator.pilot(point.params, pilots, point.channel_index, samples=spec.samples, master_seed=spec.master_seed)
            else:
                batch = self._noncoherent(spec, point)
            return pilot_dt_max_rate(batch, spec.epsilon, pilots, confidence=confidence)

        if kind in self._shared_results:
            return self._shared_results[kind]
        if kind is BoundKind.NORMAL_APPROX:
            result = normal_approx(point.params.rho, point.params.n, spec.epsilon)
        elif kind is BoundKind.DT:
            result = dt_max_rate(self._noncoherent(spec, point), spec.epsilon, confidence=confidence)
        else:
            result = converse_rate(self._noncoherent(spec, point), spec.epsilon, confidence=confidence)
        self._shared_results[kind] = result
        return result

    # -- summary ------------------------------------------------------------

    def get_summary(self) -> Dict[str, Any]:
        """Footer data: counts, timings, flags, optimal ell per curve and best n_p"""
        summary = self.state.get_summary()
        summary["optimal_ell"] = optimal_ell(self._rows)
        summary["best_n_p"] = best_pilot_count(self._rows)
        summary["errors"] = self.error_tracker.get_error_stats()
        return summary


def _usable(row: ResultRow) -> bool:
    return row.error is None and math.isfinite(row.rate_bpcu)


def optimal_ell(rows: List[ResultRow]) -> List[Dict[str, Any]]:
    """For each (bound, kappa, n_p) curve, the ell with the largest rate"""
    best: Dict[Tuple[str, float, int], ResultRow] = {}
    for row in rows:
        if not _usable(row) or row.bound == BoundKind.NORMAL_APPROX.value:
            continue
        key = (row.bound, row.kappa, row.n_p)
        if key not in best or row.rate_bpcu > best[key].rate_bpcu:
            best[key] = row
    return [{"bound": b, "kappa": k, "n_p": n_p, "ell": row.ell, "rate_bpcu": row.rate_bpcu} for (b, k, n_p), row in best.items()]


def best_pilot_count(rows: List[ResultRow]) -> List[Dict[str, Any]]:
    """For each (kappa, ell), the pilot count with the largest pilot-assisted DT rate"""
    best: Dict[Tuple[float, int], ResultRow] = {}
    for row in rows:
        if not _usable(row) or row.bound != BoundKind.PILOT_DT.value:
            continue
        key = (row.kappa, row.ell)
        if key not in best or row.rate_bpcu > best[key].rate_bpcu:
            best[key] = row
    return [{"kappa": k, "ell": ell, "n_p": row.n_p, "rate_bpcu": row.rate_bpcu} for (k, ell), row in best.items()]


def run(spec: SweepSpec, config: Optional[Config] = None) -> List[ResultRow]:
    """Run a sweep with a fresh engine"""
    return SweepEngine(config or Config()).run(spec)
