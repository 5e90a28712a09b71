"""Randomized uniformly-most-accurate lower bounds on a Bernoulli rate.

The bound is built from the statistic ``T = U + sum(X_i)`` with an
auxiliary ``U ~ Uniform[0, 1)``, whose CDF is continuous in both ``t`` and
``p``. Inverting that CDF at ``1 - alpha`` gives an exact-coverage lower
bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .binomial import check_alpha, check_n, check_p, log_binom_row
from .errors import DomainError

BISECT_TOL = 1e-10
BISECT_MAXITER = 200

#: Generator used to turn a seed into ``u``: ``np.random.default_rng(seed).random()``
#: (PCG64 seeded through SeedSequence). Documented so seeds stay meaningful.
SEEDED_GENERATOR = "numpy.random.default_rng(seed).random() [PCG64]"


class Method(str, enum.Enum):
    UMA = "uma"
    CLOPPER_PEARSON = "cp"


class Side(str, enum.Enum):
    SUCCESS = "lower-on-success"
    FAILURE = "lower-on-failure"


@dataclass(frozen=True)
class RandomizedStatistic:
    k: int
    n: int
    u: float
    seed: int | None = None

    def __post_init__(self):
        check_n(self.n)
        if not 0 <= self.k <= self.n:
            raise DomainError(f"k must lie in [0, {self.n}], got {self.k}")
        if not 0.0 <= self.u < 1.0:
            raise DomainError(f"u must lie in [0, 1), got {self.u}")

    @property
    def t(self) -> float:
        return self.k + self.u


@dataclass(frozen=True)
class LowerBoundResult:
    p_lo: float
    alpha: float
    n: int
    k: int
    u: float
    method: Method
    side: Side = Side.SUCCESS
    mes: float | None = None

    @property
    def upper(self) -> float:
        """``1 - p_lo``; an upper bound on the complementary rate."""
        return 1.0 - self.p_lo

    def to_dict(self) -> dict:
        return {
            "p_lo": self.p_lo,
            "alpha": self.alpha,
            "confidence": 1.0 - self.alpha,
            "n": self.n,
            "k": self.k,
            "u": self.u,
            "method": self.method.value,
            "side": self.side.value,
            "mes": self.mes,
        }


def draw_statistic(k: int, n: int, u: float | None = None, seed: int | None = None) -> RandomizedStatistic:
    """Materialize ``T = k + u``.

    ``u`` is used as given; otherwise it is the first draw of
    ``np.random.default_rng(seed)``, with ``seed=None`` meaning OS entropy.
    The drawn ``u`` is always stored on the result.
    """
    if u is not None and seed is not None:
        raise DomainError("pass at most one of u and seed")
    if u is None:
        u = float(np.random.default_rng(seed).random())
    return RandomizedStatistic(k=int(k), n=check_n(n), u=float(u), seed=seed)


def statistic_cdf(t: float, n: int, p: float) -> float:
    """P(T <= t) = Bin(floor(t) - 1, n, p) + (t - floor(t)) bin(floor(t), n, p)."""
    n = check_n(n)
    p = check_p(p)
    if not 0.0 <= t <= n + 1:
        raise DomainError(f"t must lie in [0, {n + 1}], got {t}")
    if t == n + 1:
        return 1.0
    return float(kernels.statistic_cdf(float(t), n, p, log_binom_row(n)))


def uma_bounds(t, n: int, alpha: float) -> np.ndarray:
    """Vectorized lower bounds for an array of statistic values."""
    n = check_n(n)
    alpha = check_alpha(alpha)
    t = np.ascontiguousarray(t, dtype=float).reshape(-1)
    if t.size and (t.min() < 0.0 or t.max() > n + 1):
        raise DomainError(f"t must lie in [0, {n + 1}]")
    return kernels.uma_bounds(t, n, alpha, log_binom_row(n), BISECT_TOL, BISECT_MAXITER)


def _solve(t: float, n: int, alpha: float) -> float:
    return float(uma_bounds(np.array([t]), n, alpha)[0])


def uma_lower_bound(stat: RandomizedStatistic, alpha: float) -> LowerBoundResult:
    """UMA lower bound on the success probability.

    Returns 0 when ``t <= 1 - alpha``, 1 when ``t >= n + 1 - alpha``, and
    otherwise the root of ``statistic_cdf(t, n, p) = 1 - alpha`` found by
    bisection to 1e-10 in ``p``.
    """
    alpha = check_alpha(alpha)
    p_lo = _solve(stat.t, stat.n, alpha)
    return LowerBoundResult(p_lo=p_lo, alpha=alpha, n=stat.n, k=stat.k, u=stat.u, method=Method.UMA)


def uma_lower_bound_on_failure(stat: RandomizedStatistic, alpha: float) -> LowerBoundResult:
    """Lower bound on the failure probability; ``stat.k`` counts failures.

    ``result.upper`` is then an upper bound on the success probability.
    """
    res = uma_lower_bound(stat, alpha)
    return LowerBoundResult(p_lo=res.p_lo, alpha=res.alpha, n=res.n, k=res.k, u=res.u,
                            method=Method.UMA, side=Side.FAILURE)


def uma_lower(k: int, n: int, alpha: float, u: float) -> float:
    """Shorthand returning the bare bound for ``t = k + u``."""
    return uma_lower_bound(draw_statistic(k, n, u=u), alpha).p_lo


def bracket(k: int, n: int, alpha: float) -> tuple[float, float]:
    """Range of the bound over all ``u``: values at ``t = k`` and ``t -> k + 1``."""
    n = check_n(n)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    return _solve(float(k), n, alpha), _solve(math.nextafter(k + 1.0, 0.0), n, alpha)
