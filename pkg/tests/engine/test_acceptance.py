"""
Statistical acceptance checks on the figure preset sweeps.

These run full-size sweeps and are deselected by default; run with ``-m slow``.
"""

import math
from collections import defaultdict

import pytest

from rician_fbl.bounds.evaluators import normal_approx
from rician_fbl.bounds.models import BoundKind
from rician_fbl.core.config import FIGURE_ELL_TICKS, Config
from rician_fbl.engine.models import SweepSpec
from rician_fbl.engine.sweep import SweepEngine

pytestmark = pytest.mark.slow

SAMPLES = 100_000
RHO_DB = 6.0
EPSILON = 1e-3


def _rates(rows):
    table = defaultdict(dict)
    for row in rows:
        assert row.error is None, row.error
        table[(row.kappa, row.ell, row.n_p)][row.bound] = row
    return table


@pytest.fixture(scope="module")
def fig1_rows():
    spec = SweepSpec(
        n_total=168,
        ell_values=list(FIGURE_ELL_TICKS),
        kappa_values=[0.0, 1.0, 10.0, 100.0, 1000.0],
        rho_db=RHO_DB,
        epsilon=EPSILON,
        bounds=[BoundKind.DT, BoundKind.CONVERSE],
        samples=SAMPLES,
    )
    return _rates(SweepEngine(Config()).run(spec))


@pytest.fixture(scope="module")
def pilot_rows():
    spec = SweepSpec(
        n_total=168,
        ell_values=list(FIGURE_ELL_TICKS),
        kappa_values=[0.0, 10.0],
        rho_db=RHO_DB,
        epsilon=EPSILON,
        np_values=[0, 1, 8],
        bounds=[BoundKind.PILOT_DT],
        samples=SAMPLES,
    )
    return _rates(SweepEngine(Config()).run(spec))


def test_dt_below_converse(fig1_rows):
    assert len(fig1_rows) == 40
    for key, rows in fig1_rows.items():
        dt, converse = rows["dt"], rows["converse"]
        assert dt.rate_bpcu - 3 * dt.stderr <= converse.rate_bpcu + 3 * converse.stderr, key


def test_awgn_limit(fig1_rows):
    reference = normal_approx(10 ** (RHO_DB / 10), 168, EPSILON).rate_bpcu
    for ell in (4, 7, 14, 21, 28, 42):
        rows = fig1_rows[(1000.0, ell, 0)]
        assert rows["dt"].rate_bpcu <= reference + 0.1, ell
        assert rows["converse"].rate_bpcu >= reference - 0.1, ell


def test_interior_optimal_diversity(fig1_rows):
    rates = {ell: fig1_rows[(0.0, ell, 0)]["dt"].rate_bpcu for ell in FIGURE_ELL_TICKS}
    best = max(rates, key=rates.get)
    assert best not in (2, 84)


def test_one_pilot_close_to_noncoherent(pilot_rows):
    for ell in FIGURE_ELL_TICKS:
        without = pilot_rows[(0.0, ell, 0)]["pilot-dt"].rate_bpcu
        one = pilot_rows[(0.0, ell, 1)]["pilot-dt"].rate_bpcu
        assert abs(one - without) <= 0.05, ell


def test_pilot_overhead_hurts_short_blocks(pilot_rows):
    # n_p = 8 needs n_c >= 10, so ell = 14 is the shortest block where it runs
    for kappa in (0.0, 10.0):
        for ell in (7, 14):
            eight = pilot_rows[(kappa, ell, 8)]["pilot-dt"].rate_bpcu
            assert eight < pilot_rows[(kappa, ell, 1)]["pilot-dt"].rate_bpcu, (kappa, ell)

    def deficit(kappa):
        return pilot_rows[(kappa, 14, 1)]["pilot-dt"].rate_bpcu - pilot_rows[(kappa, 14, 8)]["pilot-dt"].rate_bpcu

    assert deficit(10.0) > deficit(0.0)
    assert (0.0, 21, 8) not in pilot_rows


def test_rates_are_finite(fig1_rows):
    for rows in fig1_rows.values():
        assert math.isfinite(rows["dt"].rate_bpcu)
