from __future__ import annotations

import io

import numpy as np
import pytest

from boundcraft.cdf_bounds import BandSide, dkw_epsilon, solve_epsilon_star
from boundcraft.errors import DomainError
from boundcraft.harness import (
    BLOCK,
    DISTRIBUTIONS,
    block_rng,
    one_sided_deviation,
    simulate_binary_coverage,
    simulate_cdf_coverage,
    simulate_comparison,
    sweep_tightness_curves,
    write_curves_csv,
)
from boundcraft.tightness import max_expected_shortage
from boundcraft.uma import uma_bounds


def brute_deviation(row, cdf, side):
    """sup over a dense grid plus one-sided limits at every sample point."""
    row = np.sort(row)
    n = len(row)
    pts = np.concatenate([row, row - 1e-12, row + 1e-12])
    fn = np.searchsorted(row, pts, side="right") / n
    dev = cdf(pts) - fn if side is BandSide.UPPER else fn - cdf(pts)
    return max(dev.max(), 0.0)


class TestDeviation:
    @pytest.mark.parametrize("side", list(BandSide))
    def test_continuous_matches_brute_force(self, side):
        rng = np.random.default_rng(3)
        rows = np.sort(rng.random((50, 7)), axis=1)
        cdf = DISTRIBUTIONS["uniform"][1]
        got = one_sided_deviation(rows, cdf, cdf, side)
        expect = [brute_deviation(r, cdf, side) for r in rows]
        assert np.allclose(got, expect, atol=1e-10)

    def test_ties_two_point(self):
        _, cdf, cdf_left = DISTRIBUTIONS["two-point"]
        rows = np.array([[0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 1.0], [1.0, 1.0, 1.0, 1.0]])
        # F(0) = 0.5, F(0-) = 0, F(1-) = 0.5
        up = one_sided_deviation(rows, cdf, cdf_left, BandSide.UPPER)
        lo = one_sided_deviation(rows, cdf, cdf_left, BandSide.LOWER)
        assert np.allclose(up, [0.0, 0.25, 0.5])
        assert np.allclose(lo, [0.25, 0.0, 0.0])


class TestBinaryCoverage:
    def test_report_fields(self):
        rep = simulate_binary_coverage(0.5, 20, 0.1, trials=2000, seed=1)
        assert rep.trials == 2000 and rep.seed == 1
        assert abs(rep.empirical_coverage - 0.9) < 4 * rep.coverage_se + 1e-3
        assert abs(rep.empirical_mean_shortage - rep.theory_es) < 4 * rep.shortage_se
        assert rep.config["method"] == "uma"

    def test_cp_is_conservative(self):
        rep = simulate_binary_coverage(0.5, 20, 0.1, "cp", trials=5000, seed=2)
        assert rep.empirical_coverage >= 0.9 - 3 * rep.coverage_se

    def test_deterministic_across_workers(self):
        a = simulate_binary_coverage(0.3, 15, 0.05, trials=3 * BLOCK + 17, seed=9, workers=1)
        b = simulate_binary_coverage(0.3, 15, 0.05, trials=3 * BLOCK + 17, seed=9, workers=4)
        assert a == b

    def test_seed_changes_result(self):
        a = simulate_binary_coverage(0.3, 15, 0.05, trials=1000, seed=1)
        b = simulate_binary_coverage(0.3, 15, 0.05, trials=1000, seed=2)
        assert a.empirical_mean_shortage != b.empirical_mean_shortage

    def test_block_streams_are_independent_of_total(self):
        x = block_rng(5, 1).random(3)
        y = block_rng(5, 1).random(3)
        z = block_rng(5, 2).random(3)
        assert np.array_equal(x, y) and not np.array_equal(x, z)

    def test_degenerate_success(self):
        # p = 1 makes k = n every trial, so shortage is 1 - L(n + u)
        rep = simulate_binary_coverage(1.0, 10, 0.05, trials=4000, seed=3)
        rng = block_rng(3, 0)
        k = rng.binomial(10, 1.0, size=4000)
        u = rng.random(4000)
        assert np.all(k == 10)
        assert rep.empirical_mean_shortage == pytest.approx(np.mean(1.0 - uma_bounds(k + u, 10, 0.05)), abs=1e-12)
        assert abs(rep.empirical_mean_shortage - rep.theory_es) < 3 * rep.shortage_se
        assert rep.empirical_coverage == 1.0

    def test_trials_positive(self):
        with pytest.raises(DomainError):
            simulate_binary_coverage(0.3, 15, 0.05, trials=0)


class TestCdfCoverage:
    @pytest.mark.parametrize("dist", ["uniform", "normal", "exponential"])
    def test_near_nominal(self, dist):
        rep = simulate_cdf_coverage(dist, 20, 0.1, trials=4000, seed=4)
        assert abs(rep.empirical_coverage - 0.9) < 4 * rep.coverage_se
        assert rep.config["epsilon_star"] == solve_epsilon_star(20, 0.1)
        assert rep.theory_es is None

    def test_lower_side_and_dkw(self):
        rep = simulate_cdf_coverage("uniform", 20, 0.1, "dkw", trials=2000, seed=4, side="lower")
        assert rep.config["epsilon_star"] == dkw_epsilon(20, 0.1)
        assert rep.empirical_coverage >= 0.9 - 4 * rep.coverage_se

    def test_dkw_at_least_ks(self):
        ks = simulate_cdf_coverage("normal", 40, 0.05, "ks", trials=4000, seed=8)
        dkw = simulate_cdf_coverage("normal", 40, 0.05, "dkw", trials=4000, seed=8)
        # same draws, wider band
        assert dkw.empirical_coverage >= ks.empirical_coverage

    def test_unknown_distribution(self):
        with pytest.raises(DomainError):
            simulate_cdf_coverage("cauchy", 20, 0.1)


class TestComparisonSim:
    def test_equal_policies_rarely_disjoint(self):
        rep = simulate_comparison(0.5, 0.5, 30, 0.1, trials=5000, seed=0)
        assert rep.disjoint_rate <= 0.1
        assert rep.joint_coverage >= 0.9 - 0.015

    def test_separated_policies_often_disjoint(self):
        assert simulate_comparison(0.9, 0.3, 50, 0.05, trials=2000, seed=0).disjoint_rate > 0.95


class TestCurves:
    def test_rows_and_csv(self):
        rows = sweep_tightness_curves([0.05, 0.1], [5, 10], ("uma", "ks"))
        assert len(rows) == 8
        r = next(r for r in rows if (r.method, r.n, r.alpha) == ("uma", 10, 0.05))
        assert r.value == max_expected_shortage(10, 0.05).mes
        buf = io.StringIO()
        write_curves_csv(rows, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "method,n,alpha,value" and len(lines) == 9

    def test_bad_method(self):
        with pytest.raises(DomainError):
            sweep_tightness_curves([0.05], [5], ("wilson",))
