"""
Tests for sweep expansion and the sweep engine.
"""

import math

import pytest

from rician_fbl.bounds.models import BoundKind
from rician_fbl.core.config import Config
from rician_fbl.core.events import EventSystem, EventType
from rician_fbl.core.exceptions import ConvergenceError, UsageError
from rician_fbl.engine import sweep as sweep_module
from rician_fbl.engine.models import ResultRow, SweepSpec
from rician_fbl.engine.sweep import SweepEngine, best_pilot_count, expand, optimal_ell


def _config(workers: int = 1) -> Config:
    config = Config()
    config.update_section("monte_carlo", chunk_size=128, workers=workers)
    return config


def _spec(**overrides) -> SweepSpec:
    values = dict(n_total=12, ell_values=[2, 3], kappa_values=[10.0, 0.0], rho_db=6.0, epsilon=1e-2, samples=400, master_seed=1)
    values.update(overrides)
    return SweepSpec(**values)


class TestExpand:
    def test_all_divisors(self):
        spec = SweepSpec(n_total=168, ell_values="all", kappa_values=[0.0], rho_db=6.0, epsilon=1e-3)
        assert [p.ell for p in expand(spec)] == [1, 2, 3, 4, 6, 7, 8, 12, 14, 21, 24, 28, 42, 56, 84]

    def test_ordering(self):
        points = expand(_spec(np_values=[1, 0], bounds=[BoundKind.PILOT_DT]))
        keys = [(p.ell, p.kappa, p.n_p) for p in points]
        assert keys == sorted(keys)
        assert [p.index for p in points] == list(range(len(points)))
        # channel index identifies the (ell, kappa) pair
        assert [p.channel_index for p in points] == [0, 0, 1, 1, 2, 2, 3, 3]

    def test_skipped_points(self):
        points = expand(_spec(ell_values=[3], kappa_values=[0.0], np_values=[0, 2, 3], bounds=[BoundKind.PILOT_DT]))
        assert [p.skipped for p in points] == [False, False, True]

    def test_non_divisor_lists_valid_values(self):
        with pytest.raises(UsageError, match=r"\[1, 2, 3, 4, 6, 12\]"):
            _spec(ell_values=[5])

    def test_empty_expansion(self):
        with pytest.raises(UsageError):
            expand(_spec(ell_values=[12]))

    def test_negative_kappa_is_a_usage_error(self):
        with pytest.raises(UsageError):
            expand(_spec(kappa_values=[-1.0]))


class TestEngine:
    def test_rows_in_expansion_order(self):
        rows = SweepEngine(_config()).run(_spec())
        assert len(rows) == 2 * 2 * 2
        assert [(r.ell, r.kappa, r.bound) for r in rows] == [
            (ell, kappa, bound) for ell in (2, 3) for kappa in (0.0, 10.0) for bound in ("dt", "converse")
        ]
        for row in rows:
            assert row.n_c * row.ell == 12
            assert row.samples == 400
            assert row.seed == 1
            assert row.error is None

    def test_deterministic_across_workers(self):
        serial = SweepEngine(_config(workers=1)).run(_spec())
        parallel = SweepEngine(_config(workers=4)).run(_spec())
        assert [r.rate_bpcu for r in serial] == [r.rate_bpcu for r in parallel]

    def test_deterministic_across_chunk_sizes(self):
        small = _config()
        large = _config()
        large.update_section("monte_carlo", chunk_size=300)
        first = SweepEngine(small).run(_spec(kappa_values=[0.0]))
        second = SweepEngine(large).run(_spec(kappa_values=[0.0]))
        assert [(r.rate_bpcu, r.aux) for r in first] == [(r.rate_bpcu, r.aux) for r in second]

    def test_converse_above_dt(self):
        rows = SweepEngine(_config()).run(_spec(samples=2000))
        by_point = {}
        for row in rows:
            by_point.setdefault((row.ell, row.kappa), {})[row.bound] = row.rate_bpcu
        for rates in by_point.values():
            assert rates["converse"] >= rates["dt"]

    def test_normal_approx_rows(self):
        rows = SweepEngine(_config()).run(_spec(bounds=[BoundKind.NORMAL_APPROX], samples=10))
        assert len({r.rate_bpcu for r in rows}) == 1
        assert all(r.samples == 0 for r in rows)

    def test_pilot_dt_without_pilots_matches_dt(self):
        rows = SweepEngine(_config()).run(_spec(bounds=[BoundKind.DT, BoundKind.PILOT_DT]))
        for dt, pilot in zip(rows[::2], rows[1::2]):
            assert (dt.bound, pilot.bound) == ("dt", "pilot-dt")
            assert dt.rate_bpcu == pilot.rate_bpcu

    def test_skipped_points_emit_no_rows(self):
        engine = SweepEngine(_config())
        rows = engine.run(_spec(ell_values=[3], kappa_values=[0.0], np_values=[0, 2, 3], bounds=[BoundKind.PILOT_DT]))
        assert [r.n_p for r in rows] == [0, 2]
        summary = engine.get_summary()
        assert summary["skipped"] == 1
        assert len(summary["skipped_points"]) == 1
        assert summary["best_n_p"][0]["n_p"] in (0, 2)

    def test_failure_becomes_error_rows(self, monkeypatch):
        original = sweep_module.converse_rate

        def flaky(batch, epsilon, confidence):
            if batch.params.ell == 3:
                raise ConvergenceError("no convergence", {"ell": 3})
            return original(batch, epsilon, confidence=confidence)

        monkeypatch.setattr(sweep_module, "converse_rate", flaky)
        engine = SweepEngine(_config())
        rows = engine.run(_spec(kappa_values=[0.0]))
        assert len(rows) == 4
        failed = [r for r in rows if r.error]
        assert [(r.ell, r.bound) for r in failed] == [(3, "dt"), (3, "converse")]
        assert all(math.isnan(r.rate_bpcu) for r in failed)
        assert "ConvergenceError" in failed[0].error
        assert engine.get_summary()["failed"] == 1

    def test_events(self):
        events = EventSystem()
        completed = []
        finished = []
        events.subscribe(EventType.POINT_COMPLETED, completed.append)
        events.subscribe(EventType.SWEEP_FINISHED, finished.append)
        SweepEngine(_config(), event_system=events).run(_spec(kappa_values=[0.0]))
        assert len(completed) == 2
        assert len(finished) == 1

    def test_repeated_runs_reset_state(self):
        engine = SweepEngine(_config())
        first = engine.run(_spec(kappa_values=[0.0]))
        second = engine.run(_spec(kappa_values=[0.0]))
        assert len(second) == len(first)
        assert [r.rate_bpcu for r in first] == [r.rate_bpcu for r in second]


def _row(ell, kappa, bound, rate, n_p=0, error=None):
    return ResultRow(ell=ell, n_c=12 // ell, kappa=kappa, n_p=n_p, bound=bound, rate_bpcu=rate, stderr=0.0, samples=10, seed=0, error=error)


def test_optimal_ell():
    rows = [
        _row(2, 0.0, "dt", 0.5),
        _row(3, 0.0, "dt", 0.7),
        _row(4, 0.0, "dt", 0.6),
        _row(6, 0.0, "dt", math.nan, error="boom"),
        _row(2, 0.0, "normal-approx", 2.0),
    ]
    assert optimal_ell(rows) == [{"bound": "dt", "kappa": 0.0, "n_p": 0, "ell": 3, "rate_bpcu": 0.7}]


def test_best_pilot_count():
    rows = [_row(2, 0.0, "pilot-dt", 0.4, n_p=0), _row(2, 0.0, "pilot-dt", 0.6, n_p=1), _row(2, 0.0, "pilot-dt", 0.5, n_p=2), _row(2, 0.0, "converse", 2.0)]
    assert best_pilot_count(rows) == [{"kappa": 0.0, "ell": 2, "n_p": 1, "rate_bpcu": 0.6}]
