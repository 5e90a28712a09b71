"""Deterministic Clopper-Pearson lower bound (the ``u = 0`` special case)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .binomial import check_alpha, check_n, check_p
from .errors import DomainError
from .uma import LowerBoundResult, Method, uma_bounds


def clopper_pearson_lower(k: int, n: int, alpha: float) -> LowerBoundResult:
    """Root of ``Bin(k - 1, n, p) = 1 - alpha``; zero when ``k = 0``."""
    n = check_n(n)
    alpha = check_alpha(alpha)
    if not 0 <= k <= n:
        raise DomainError(f"k must lie in [0, {n}], got {k}")
    p_lo = float(cp_breakpoints(n, alpha)[k])
    return LowerBoundResult(p_lo=p_lo, alpha=alpha, n=n, k=int(k), u=0.0, method=Method.CLOPPER_PEARSON)


@lru_cache(maxsize=1024)
def _breakpoints(n: int, alpha: float) -> np.ndarray:
    b = np.empty(n + 2)
    b[: n + 1] = uma_bounds(np.arange(n + 1, dtype=float), n, alpha)
    b[0] = 0.0
    b[n + 1] = 1.0
    b.flags.writeable = False
    return b


def cp_breakpoints(n: int, alpha: float) -> np.ndarray:
    """Clopper-Pearson bounds for k = 0..n followed by a closing 1.0.

    Cached per ``(n, alpha)`` and read-only; length ``n + 2``.
    """
    return _breakpoints(check_n(n), check_alpha(alpha))


def cp_threshold_index(p0: float, n: int, alpha: float) -> int:
    """Largest k whose Clopper-Pearson bound does not exceed ``p0``."""
    p0 = check_p(p0, "p0")
    b = cp_breakpoints(n, alpha)
    return int(np.searchsorted(b[: n + 1], p0, side="right")) - 1
