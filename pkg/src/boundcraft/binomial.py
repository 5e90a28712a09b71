"""Binomial PMF/CDF evaluated in log space.

All probabilities are computed as
``exp(ln C(n, k) + k ln p + (n - k) ln(1 - p))`` with exact branches at
``p = 0`` and ``p = 1``; the CDF is a direct sum of PMF terms.
"""

from __future__ import annotations

import math
from functools import lru_cache
from numbers import Integral

import numpy as np

from . import kernels
from .errors import DomainError


def check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, Integral) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return int(n)


def check_p(p, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p}")
    return p


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def log_binom_coeff(n: int, k: int) -> float:
    """ln C(n, k) via log-gamma."""
    n = check_n(n)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@lru_cache(maxsize=256)
def _log_binom_row(n: int) -> np.ndarray:
    row = np.array([log_binom_coeff(n, k) for k in range(n + 1)])
    row.flags.writeable = False
    return row


def log_binom_row(n: int) -> np.ndarray:
    """Read-only array of ln C(n, k) for k = 0..n, cached per n."""
    return _log_binom_row(check_n(n))


def binom_pmf(k: int, n: int, p: float) -> float:
    n = check_n(n)
    p = check_p(p)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    return math.exp(log_binom_coeff(n, k) + k * math.log(p) + (n - k) * math.log1p(-p))


def binom_cdf(k: int, n: int, p: float) -> float:
    """P(X <= k) for X ~ Binomial(n, p). ``k = -1`` gives the empty sum."""
    n = check_n(n)
    p = check_p(p)
    if not -1 <= k <= n:
        raise DomainError(f"k must lie in [-1, {n}], got {k}")
    return float(kernels.binom_cdf(int(k), n, p, log_binom_row(n)))
