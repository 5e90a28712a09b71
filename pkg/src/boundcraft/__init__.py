"""Tight confidence bounds for black-box policy evaluation.

Binary success rates get the randomized uniformly-most-accurate lower bound
(or Clopper-Pearson), continuous rewards get one-sided KS or DKW bands on
their CDF, and both come with tightness metrics and sample-size planning.
"""

from __future__ import annotations

__version__ = "0.1.0"

from ._accel import BACKEND, HAVE_NUMBA
from .binomial import binom_cdf, binom_pmf, log_binom_coeff
from .cdf_bounds import (
    BandMethod,
    BandSide,
    CdfBand,
    EmpiricalCdf,
    band_mean_bound,
    band_quantile_bound,
    dkw_epsilon,
    ks_minus_cdf,
    lower_band,
    plan_epsilon_sample_size,
    read_band_csv,
    solve_epsilon_star,
    upper_band,
)
from .clopper_pearson import clopper_pearson_lower, cp_breakpoints
from .comparison import ComparisonVerdict, compare_continuous, compare_policies, fisher_exact_one_sided
from .errors import BoundcraftError, CapacityError, DomainError, ParseError, UsageError, ValidationError
from .harness import (
    CoverageReport,
    simulate_binary_coverage,
    simulate_cdf_coverage,
    simulate_comparison,
    sweep_tightness_curves,
)
from .rollouts import RolloutLog, ingest, parse_log
from .tightness import (
    MesResult,
    ShortageModel,
    expected_shortage_cp,
    expected_shortage_uma,
    max_expected_shortage,
    plan_sample_size,
    shortage_model,
    t_star,
)
from .uma import (
    LowerBoundResult,
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

__all__ = [
    "BACKEND", "HAVE_NUMBA",
    "binom_cdf", "binom_pmf", "log_binom_coeff",
    "BandMethod", "BandSide", "CdfBand", "EmpiricalCdf", "band_mean_bound", "band_quantile_bound",
    "dkw_epsilon", "ks_minus_cdf", "lower_band", "plan_epsilon_sample_size", "read_band_csv",
    "solve_epsilon_star", "upper_band",
    "clopper_pearson_lower", "cp_breakpoints",
    "ComparisonVerdict", "compare_continuous", "compare_policies", "fisher_exact_one_sided",
    "BoundcraftError", "CapacityError", "DomainError", "ParseError", "UsageError", "ValidationError",
    "CoverageReport", "simulate_binary_coverage", "simulate_cdf_coverage", "simulate_comparison",
    "sweep_tightness_curves",
    "RolloutLog", "ingest", "parse_log",
    "MesResult", "ShortageModel", "expected_shortage_cp", "expected_shortage_uma",
    "max_expected_shortage", "plan_sample_size", "shortage_model", "t_star",
    "LowerBoundResult", "Method", "RandomizedStatistic", "Side", "bracket", "draw_statistic",
    "statistic_cdf", "uma_bounds", "uma_lower", "uma_lower_bound", "uma_lower_bound_on_failure",
]
