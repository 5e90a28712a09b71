"""Two-policy comparison by disjoint one-sided bounds.

Policy A gets a lower bound on its success rate, policy B an upper bound
(one minus a lower bound on its failure rate). Each bound uses part of
the joint error budget, so by the union bound both hold simultaneously
with probability at least ``1 - joint_alpha``. Disjoint bounds license the
claim that A outperforms B, and the bounds themselves still describe each
policy's absolute performance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .binomial import check_alpha, check_n
from .cdf_bounds import BandMethod, CdfBand, band_mean_bound, lower_band, upper_band
from .errors import DomainError
from .uma import uma_lower


def _check_counts(k: int, n: int, name: str) -> None:
    check_n(n)
    if not 0 <= k <= n:
        raise DomainError(f"{name}: successes must lie in [0, {n}], got {k}")


@dataclass(frozen=True)
class ComparisonVerdict:
    p_lo_a: float
    p_ub_b: float
    joint_confidence: float
    disjoint: bool
    per_bound_alpha: float
    per_bound_alpha_b: float
    counts: tuple[int, int, int, int]
    u_draws: tuple[float, float]
    seed: int | None = None
    fisher_p: float | None = None

    def to_dict(self) -> dict:
        k_a, n_a, k_b, n_b = self.counts
        d = {
            "counts": {"k_a": k_a, "n_a": n_a, "k_b": k_b, "n_b": n_b},
            "joint_alpha": 1.0 - self.joint_confidence,
            "joint_confidence": self.joint_confidence,
            "per_bound_alpha": {"a": self.per_bound_alpha, "b": self.per_bound_alpha_b},
            "u_draws": {"a": self.u_draws[0], "b": self.u_draws[1]},
            "seed": self.seed,
            "p_lo_a": self.p_lo_a,
            "p_ub_b": self.p_ub_b,
            "disjoint": self.disjoint,
        }
        if self.fisher_p is not None:
            d["fisher_p"] = self.fisher_p
        return d


def compare_policies(k_a: int, n_a: int, k_b: int, n_b: int, joint_alpha: float,
                     u_a: float | None = None, u_b: float | None = None,
                     seed: int | None = None, split: float = 0.5,
                     fisher: bool = False) -> ComparisonVerdict:
    """Test "A has a higher success rate than B" at joint level ``1 - joint_alpha``.

    ``split`` is the fraction of ``joint_alpha`` spent on A's bound. Missing
    ``u`` draws come from ``np.random.default_rng(seed)``, A first.
    """
    _check_counts(k_a, n_a, "policy A")
    _check_counts(k_b, n_b, "policy B")
    joint_alpha = check_alpha(joint_alpha)
    if not 0.0 < split < 1.0:
        raise DomainError(f"split must lie in (0, 1), got {split}")
    if u_a is None or u_b is None:
        rng = np.random.default_rng(seed)
        draws = rng.random(2)
        u_a = float(draws[0]) if u_a is None else u_a
        u_b = float(draws[1]) if u_b is None else u_b

    alpha_a = joint_alpha * split
    alpha_b = joint_alpha * (1.0 - split)
    p_lo_a = uma_lower(k_a, n_a, alpha_a, u_a)
    q_lo_b = uma_lower(n_b - k_b, n_b, alpha_b, u_b)
    p_ub_b = 1.0 - q_lo_b
    return ComparisonVerdict(
        p_lo_a=p_lo_a,
        p_ub_b=p_ub_b,
        joint_confidence=1.0 - joint_alpha,
        disjoint=p_ub_b < p_lo_a,
        per_bound_alpha=alpha_a,
        per_bound_alpha_b=alpha_b,
        counts=(int(k_a), int(n_a), int(k_b), int(n_b)),
        u_draws=(float(u_a), float(u_b)),
        seed=seed,
        fisher_p=fisher_exact_one_sided(k_a, n_a, k_b, n_b) if fisher else None,
    )


def fisher_exact_one_sided(k_a: int, n_a: int, k_b: int, n_b: int) -> float:
    """One-sided Fisher p-value for "A's success rate exceeds B's".

    Conditional on the margins, A's success count is hypergeometric; the
    p-value is its upper tail at ``k_a``, summed in exact integer arithmetic.
    """
    _check_counts(k_a, n_a, "policy A")
    _check_counts(k_b, n_b, "policy B")
    total = k_a + k_b
    hi = min(n_a, total)
    num = sum(math.comb(n_a, x) * math.comb(n_b, total - x) for x in range(k_a, hi + 1))
    return float(Fraction(num, math.comb(n_a + n_b, total)))


@dataclass(frozen=True, eq=False)
class ContinuousComparison:
    band_a: CdfBand
    band_b: CdfBand
    mean_lo_a: float
    mean_hi_b: float
    disjoint: bool


def compare_continuous(samples_a, samples_b, joint_alpha: float, support,
                       method=BandMethod.KS) -> ContinuousComparison:
    """Continuous-reward analogue via worst/best-case means on a bounded support.

    A's upper CDF band gives the lowest mean consistent with its data, B's
    lower band the highest; disjoint when the former exceeds the latter.
    """
    joint_alpha = check_alpha(joint_alpha)
    band_a = upper_band(samples_a, joint_alpha / 2.0, method)
    band_b = lower_band(samples_b, joint_alpha / 2.0, method)
    lo_a = band_mean_bound(band_a, support)
    hi_b = band_mean_bound(band_b, support)
    return ContinuousComparison(band_a, band_b, lo_a, hi_b, hi_b < lo_a)
