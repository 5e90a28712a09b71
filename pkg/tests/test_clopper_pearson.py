from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import beta

from boundcraft.binomial import binom_cdf
from boundcraft.clopper_pearson import clopper_pearson_lower, cp_breakpoints, cp_threshold_index
from boundcraft.errors import DomainError
from boundcraft.uma import Method


class TestClopperPearson:
    @given(n=st.integers(1, 300), data=st.data(), alpha=st.sampled_from([0.001, 0.01, 0.05, 0.1, 0.25]))
    def test_matches_beta_quantile(self, n, data, alpha):
        k = data.draw(st.integers(1, n))
        assert clopper_pearson_lower(k, n, alpha).p_lo == pytest.approx(beta.ppf(alpha, k, n - k + 1), abs=1e-9)

    def test_k_zero(self):
        assert clopper_pearson_lower(0, 20, 0.05).p_lo == 0.0

    def test_all_successes_closed_form(self):
        assert clopper_pearson_lower(20, 20, 0.05).p_lo == pytest.approx(0.05 ** (1 / 20), abs=1e-10)

    def test_defining_equation(self):
        p = clopper_pearson_lower(17, 40, 0.05).p_lo
        assert binom_cdf(16, 40, p) == pytest.approx(0.95, abs=1e-8)

    def test_result_metadata(self):
        res = clopper_pearson_lower(5, 10, 0.1)
        assert res.method is Method.CLOPPER_PEARSON and res.u == 0.0

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            clopper_pearson_lower(11, 10, 0.05)


class TestBreakpoints:
    def test_layout(self):
        b = cp_breakpoints(15, 0.05)
        assert b.shape == (17,)
        assert b[0] == 0.0 and b[-1] == 1.0
        assert np.all(np.diff(b) > 0)
        assert not b.flags.writeable
        assert b is cp_breakpoints(15, 0.05)

    def test_threshold_index(self):
        b = cp_breakpoints(15, 0.05)
        assert cp_threshold_index(0.0, 15, 0.05) == 0
        assert cp_threshold_index(b[7], 15, 0.05) == 7
        assert cp_threshold_index(np.nextafter(b[7], 0), 15, 0.05) == 6
        assert cp_threshold_index(1.0, 15, 0.05) == 15


class TestReferenceValues:
    def test_below_randomized_bound(self):
        from boundcraft.uma import uma_lower

        assert clopper_pearson_lower(38, 50, 0.05).p_lo < uma_lower(38, 50, 0.05, 0.5)

    def test_threshold_index_by_scan(self):
        bounds = [clopper_pearson_lower(k, 10, 0.05).p_lo for k in range(11)]
        for p0 in np.linspace(0, 1, 101):
            expect = max(k for k, b in enumerate(bounds) if b <= p0)
            assert cp_threshold_index(p0, 10, 0.05) == expect

    @given(alpha=st.floats(0.01, 0.4), n=st.integers(2, 60), data=st.data())
    def test_monotone_in_k_and_alpha(self, alpha, n, data):
        k = data.draw(st.integers(1, n - 1))
        assert clopper_pearson_lower(k, n, alpha).p_lo < clopper_pearson_lower(k + 1, n, alpha).p_lo
        assert clopper_pearson_lower(k, n, alpha * 0.5).p_lo <= clopper_pearson_lower(k, n, alpha).p_lo
