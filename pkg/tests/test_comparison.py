from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import fisher_exact

from boundcraft.comparison import compare_continuous, compare_policies, fisher_exact_one_sided
from boundcraft.errors import DomainError
from boundcraft.uma import uma_lower


class TestFisher:
    def test_extreme_table(self):
        assert fisher_exact_one_sided(5, 5, 0, 5) == pytest.approx(1 / 252, abs=1e-15)

    @given(n_a=st.integers(1, 30), n_b=st.integers(1, 30), data=st.data())
    def test_matches_scipy(self, n_a, n_b, data):
        k_a = data.draw(st.integers(0, n_a))
        k_b = data.draw(st.integers(0, n_b))
        _, expect = fisher_exact([[k_a, n_a - k_a], [k_b, n_b - k_b]], alternative="greater")
        assert fisher_exact_one_sided(k_a, n_a, k_b, n_b) == pytest.approx(expect, rel=1e-9, abs=1e-15)

    def test_invalid(self):
        with pytest.raises(DomainError):
            fisher_exact_one_sided(6, 5, 0, 5)


class TestComparePolicies:
    def test_clear_winner(self):
        v = compare_policies(48, 50, 20, 50, 0.05, u_a=0.5, u_b=0.5)
        assert v.disjoint
        assert v.p_ub_b < v.p_lo_a
        assert v.joint_confidence == pytest.approx(0.95)

    def test_tie_is_not_disjoint(self):
        assert not compare_policies(30, 50, 30, 50, 0.05, u_a=0.9, u_b=0.1).disjoint

    def test_budget_split(self):
        v = compare_policies(30, 50, 20, 50, 0.1, u_a=0.2, u_b=0.7, split=0.3)
        assert v.per_bound_alpha == pytest.approx(0.03)
        assert v.per_bound_alpha_b == pytest.approx(0.07)
        assert v.p_lo_a == uma_lower(30, 50, 0.03, 0.2)
        assert v.p_ub_b == pytest.approx(1 - uma_lower(30, 50, 0.07, 0.7))

    def test_seeded_draws_recorded(self):
        v1 = compare_policies(30, 50, 20, 50, 0.05, seed=7)
        v2 = compare_policies(30, 50, 20, 50, 0.05, seed=7)
        assert v1 == v2
        assert v1.u_draws == tuple(np.random.default_rng(7).random(2))
        v3 = compare_policies(30, 50, 20, 50, 0.05, u_a=v1.u_draws[0], u_b=v1.u_draws[1])
        assert (v3.p_lo_a, v3.p_ub_b) == (v1.p_lo_a, v1.p_ub_b)

    def test_fisher_optional(self):
        assert compare_policies(5, 5, 0, 5, 0.05, u_a=0, u_b=0).fisher_p is None
        v = compare_policies(5, 5, 0, 5, 0.05, u_a=0, u_b=0, fisher=True)
        assert v.fisher_p == pytest.approx(1 / 252)
        assert v.to_dict()["fisher_p"] == v.fisher_p

    @pytest.mark.parametrize("split", [0.0, 1.0])
    def test_split_domain(self, split):
        with pytest.raises(DomainError):
            compare_policies(3, 5, 1, 5, 0.05, u_a=0.1, u_b=0.1, split=split)


class TestContinuous:
    def test_separated_samples(self):
        rng = np.random.default_rng(0)
        a = rng.uniform(0.7, 1.0, 200)
        b = rng.uniform(0.0, 0.3, 200)
        res = compare_continuous(a, b, 0.05, (0.0, 1.0))
        assert res.disjoint and res.mean_lo_a > res.mean_hi_b
        assert res.band_a.alpha == res.band_b.alpha == pytest.approx(0.025)

    def test_same_samples(self):
        xs = np.linspace(0, 1, 50)
        assert not compare_continuous(xs, xs, 0.05, (0, 1)).disjoint
