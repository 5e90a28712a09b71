from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boundcraft.binomial import binom_cdf, binom_pmf
from boundcraft.clopper_pearson import clopper_pearson_lower
from boundcraft.errors import DomainError
from boundcraft.uma import (
    Method,
    RandomizedStatistic,
    Side,
    bracket,
    draw_statistic,
    statistic_cdf,
    uma_bounds,
    uma_lower,
    uma_lower_bound,
    uma_lower_bound_on_failure,
)


class TestStatisticCdf:
    def test_formula_at_fractional_t(self):
        n, p, t = 12, 0.3, 5.25
        expect = binom_cdf(4, n, p) + 0.25 * binom_pmf(5, n, p)
        assert statistic_cdf(t, n, p) == pytest.approx(expect, rel=1e-13)

    def test_endpoints(self):
        assert statistic_cdf(0.0, 5, 0.4) == 0.0
        assert statistic_cdf(6.0, 5, 0.4) == 1.0

    @given(n=st.integers(1, 30), p=st.floats(0.01, 0.99), x=st.floats(0, 1), y=st.floats(0, 1))
    def test_monotone_in_t(self, n, p, x, y):
        a, b = sorted((x * (n + 1), y * (n + 1)))
        assert statistic_cdf(a, n, p) <= statistic_cdf(b, n, p) + 1e-14

    @given(n=st.integers(1, 30), k=st.integers(0, 30), p=st.floats(0.0, 1.0))
    def test_continuous_across_integers(self, n, k, p):
        k = min(k, n)
        left = statistic_cdf(math.nextafter(k + 1.0, 0.0), n, p)
        right = statistic_cdf(float(k + 1), n, p)
        assert left == pytest.approx(right, abs=1e-12)

    def test_t_out_of_range(self):
        with pytest.raises(DomainError):
            statistic_cdf(7.5, 5, 0.4)


class TestLowerBound:
    def test_zero_and_one_regions(self):
        n, alpha = 10, 0.05
        lo = uma_bounds(np.array([0.0, 0.5, 0.95, n + 1 - alpha, n + 0.99]), n, alpha)
        assert lo[0] == lo[1] == lo[2] == 0.0
        assert lo[3] == lo[4] == 1.0

    @given(n=st.integers(1, 80), data=st.data(), u=st.floats(0.0, 0.999999), alpha=st.sampled_from([0.01, 0.05, 0.1, 0.3]))
    def test_root_solves_cdf_equation(self, n, data, u, alpha):
        k = data.draw(st.integers(0, n))
        t = k + u
        p = uma_lower(k, n, alpha, u)
        if 0.0 < p < 1.0:
            # bisection tolerance 1e-10 in p, and |dF/dp| <= n + 1
            assert statistic_cdf(t, n, p) == pytest.approx(1 - alpha, abs=(n + 1) * 2e-10)
        elif p == 0.0:
            assert t <= 1 - alpha + 1e-12
        else:
            assert t >= n + 1 - alpha - 1e-12

    @given(n=st.integers(1, 60), x=st.floats(0, 1), y=st.floats(0, 1))
    def test_monotone_in_t(self, n, x, y):
        a, b = sorted((x * (n + 1), y * (n + 1)))
        la, lb = uma_bounds(np.array([a, b]), n, 0.05)
        assert la <= lb + 1e-10

    @given(n=st.integers(1, 60), data=st.data())
    def test_u_zero_is_clopper_pearson(self, n, data):
        k = data.draw(st.integers(0, n))
        assert uma_lower(k, n, 0.05, 0.0) == pytest.approx(clopper_pearson_lower(k, n, 0.05).p_lo, abs=1e-12)

    @given(n=st.integers(1, 60), data=st.data(), u=st.floats(0, 0.999))
    def test_never_below_clopper_pearson(self, n, data, u):
        k = data.draw(st.integers(0, n))
        assert uma_lower(k, n, 0.05, u) >= clopper_pearson_lower(k, n, 0.05).p_lo - 1e-10

    def test_vectorized_matches_scalar(self):
        ts = np.linspace(0, 21, 57)
        vec = uma_bounds(ts, 20, 0.1)
        assert vec[-1] == 1.0
        for t, v in zip(ts[:-1], vec[:-1]):
            k = int(t)
            assert v == uma_lower(k, 20, 0.1, t - k)


class TestBrackets:
    @pytest.mark.parametrize("k,reported", [(38, 0.641), (4, 0.035)])
    def test_reported_values_inside(self, k, reported):
        lo, hi = bracket(k, 50, 0.05)
        assert lo <= reported <= hi

    def test_frozen_bracket_values(self):
        assert bracket(38, 50, 0.05) == pytest.approx((0.640344, 0.662226), abs=1e-6)
        assert bracket(4, 50, 0.05) == pytest.approx((0.027788, 0.040237), abs=1e-6)

    def test_adjacent_brackets_touch(self):
        _, hi = bracket(10, 40, 0.05)
        lo, _ = bracket(11, 40, 0.05)
        assert hi == pytest.approx(lo, abs=1e-9)


class TestStatisticObject:
    def test_seed_is_reproducible_and_recorded(self):
        a = draw_statistic(3, 10, seed=42)
        b = draw_statistic(3, 10, seed=42)
        assert a.u == b.u == float(np.random.default_rng(42).random())
        assert a.seed == 42
        assert a.t == 3 + a.u

    def test_entropy_draw_is_recorded(self):
        s = draw_statistic(3, 10)
        assert 0.0 <= s.u < 1.0

    def test_u_and_seed_conflict(self):
        with pytest.raises(DomainError):
            draw_statistic(3, 10, u=0.5, seed=1)

    @pytest.mark.parametrize("k,n,u", [(-1, 5, 0.1), (6, 5, 0.1), (2, 5, 1.0), (2, 5, -0.1), (0, 0, 0.1)])
    def test_invalid(self, k, n, u):
        with pytest.raises(DomainError):
            RandomizedStatistic(k, n, u)

    def test_failure_side_gives_success_upper_bound(self):
        stat = draw_statistic(12, 50, u=0.4)  # 12 failures
        res = uma_lower_bound_on_failure(stat, 0.05)
        assert res.side is Side.FAILURE
        assert res.upper == pytest.approx(1 - uma_lower(12, 50, 0.05, 0.4))

    def test_result_dict(self):
        res = uma_lower_bound(draw_statistic(38, 50, u=0.5), 0.05)
        d = res.to_dict()
        assert d["method"] == Method.UMA.value and d["confidence"] == pytest.approx(0.95)
        assert d["u"] == 0.5
