"""Expected shortage, maximum expected shortage and sample-size planning.

Expected shortage of a lower bound ``L`` at true rate ``p`` is
``E_p[max(p - L, 0)] = int_0^p P_p(L <= p0) dp0``. For the randomized
bound, ``P_p(L <= p0) = F_p(t*(p0))`` where ``t*(p0)`` solves
``F_{p0}(t*) = 1 - alpha``.

Replacing the outer ``p`` by ``p2`` in the integrand and the upper limit by
``p1`` gives ``ES(p1, p2)``, nondecreasing in ``p1`` and nonincreasing in
``p2``. That mixed monotonicity drives the branch-and-bound in
:func:`max_expected_shortage`.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .binomial import check_alpha, check_n, check_p, log_binom_row
from .clopper_pearson import cp_breakpoints
from .errors import CapacityError, DomainError
from .uma import Method

ES_RTOL = 1e-8
DEFAULT_MES_TOL = 1e-4
PLAN_MES_TOL = 1e-6
DEFAULT_N_CAP = 10**6


def _method(method) -> Method:
    try:
        return Method(method)
    except ValueError:
        raise DomainError(f"unknown method {method!r}; expected 'uma' or 'cp'") from None


def t_star(p0: float, n: int, alpha: float) -> float:
    """Statistic value at which the bound crosses ``p0``: ``F_{p0}(t*) = 1 - alpha``."""
    n = check_n(n)
    alpha = check_alpha(alpha)
    p0 = float(p0)
    if not 0.0 < p0 < 1.0:
        raise DomainError(f"p0 must lie in (0, 1), got {p0}")
    return float(kernels.t_star(p0, n, alpha, log_binom_row(n)))


def expected_shortage_uma(p: float, n: int, alpha: float, rtol: float = ES_RTOL) -> float:
    """Expected shortage of the randomized bound by direct adaptive quadrature.

    The integrand is smooth between consecutive Clopper-Pearson bounds, so
    those are used as panel boundaries.
    """
    p = check_p(p)
    n = check_n(n)
    alpha = check_alpha(alpha)
    return float(kernels.es_uma_direct(p, n, alpha, log_binom_row(n), cp_breakpoints(n, alpha), rtol))


def expected_shortage_cp(p: float, n: int, alpha: float) -> float:
    """Exact expected shortage of the Clopper-Pearson bound.

    ``P_p(L_CP <= p0) = Bin(k*(p0), n, p)`` is a step function of ``p0``
    with jumps at the Clopper-Pearson bounds, so the integral is a finite
    sum of segment lengths.
    """
    p = check_p(p)
    return shortage_model(n, alpha, Method.CLOPPER_PEARSON)(p)


class ShortageModel:
    """Mixed-monotone ``ES(p1, p2)`` for one ``(n, alpha, method)``.

    For the randomized bound, inside the segment between consecutive
    Clopper-Pearson bounds ``b_m < p0 <= b_{m+1}`` the integrand equals
    ``Bin(m - 1, n, p2) + bin(m, n, p2) * g_m(p0)``, so only the integrals
    of ``g_m`` need quadrature. Full-segment integrals are computed once.
    """

    def __init__(self, n: int, alpha: float, method=Method.UMA, rtol: float = ES_RTOL):
        self.n = check_n(n)
        self.alpha = check_alpha(alpha)
        self.method = _method(method)
        self.rtol = rtol
        self._lgc = log_binom_row(self.n)
        self._bps = cp_breakpoints(self.n, self.alpha)
        if self.method is Method.UMA:
            self._seg = kernels.segment_integrals(self.n, self.alpha, self._lgc, self._bps, rtol)
        else:
            self._seg = None

    def es(self, p1: float, p2: float) -> float:
        if self.method is Method.UMA:
            return float(kernels.es_mixed_uma(p1, p2, self.n, self.alpha, self._lgc,
                                              self._bps, self._seg, self.rtol))
        return float(kernels.es_mixed_cp(p1, p2, self.n, self._bps, self._lgc))

    def __call__(self, p: float) -> float:
        return self.es(p, p)

    def curve(self, ps) -> np.ndarray:
        return np.array([self(float(p)) for p in ps])


@lru_cache(maxsize=512)
def _model(n: int, alpha: float, method: Method) -> ShortageModel:
    return ShortageModel(n, alpha, method)


def shortage_model(n: int, alpha: float, method=Method.UMA) -> ShortageModel:
    return _model(check_n(n), check_alpha(alpha), _method(method))


@dataclass(frozen=True)
class MesResult:
    mes: float
    argmax_p: float
    gap: float
    method: Method
    n: int
    alpha: float
    tol: float
    boxes: int = field(default=0, compare=False)

    @property
    def upper(self) -> float:
        """Certified upper bound on the true maximum."""
        return self.mes + self.gap

    def to_dict(self) -> dict:
        return {
            "mes": self.mes,
            "argmax_p": self.argmax_p,
            "gap": self.gap,
            "method": self.method.value,
            "n": self.n,
            "alpha": self.alpha,
            "tol": self.tol,
            "boxes": self.boxes,
        }


def max_expected_shortage(n: int, alpha: float, method=Method.UMA, tol: float = DEFAULT_MES_TOL,
                          max_boxes: int = 1_000_000) -> MesResult:
    """Certified global maximum of expected shortage over ``p`` in [0, 1].

    Best-first branch-and-bound on intervals ``[l, u]``: ``ES(u, l)`` bounds
    the interval from above, ``ES(mid, mid)`` is a feasible value. Boxes
    whose bound is within ``tol`` of the incumbent are discarded; the
    returned ``gap`` is the largest such excess and never exceeds ``tol``
    unless ``max_boxes`` or the width floor stops the search first.
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    model = shortage_model(n, alpha, method)

    best, arg = 0.0, 0.0
    for p in (0.5, 1.0):
        v = model(p)
        if v > best:
            best, arg = v, p

    heap = [(-model.es(1.0, 0.0), 0.0, 1.0)]
    worst_dropped = 0.0
    boxes = 1
    while heap:
        ub = -heap[0][0]
        if ub <= best + tol:
            worst_dropped = max(worst_dropped, ub)
            break
        _, lo, hi = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v = model(mid)
        if v > best:
            best, arg = v, mid
        if hi - lo < 1e-12 or boxes >= max_boxes:
            worst_dropped = max(worst_dropped, ub)
            continue
        for a, b in ((lo, mid), (mid, hi)):
            cub = model.es(b, a)
            boxes += 1
            if cub > best + tol:
                heapq.heappush(heap, (-cub, a, b))
            else:
                worst_dropped = max(worst_dropped, cub)
    gap = max(worst_dropped - best, 0.0)
    return MesResult(mes=best, argmax_p=arg, gap=gap, method=model.method, n=model.n,
                     alpha=model.alpha, tol=tol, boxes=boxes)


def mes_lower_estimate(n: int, alpha: float) -> float:
    """Cheap rigorous lower bound on the MES of either method.

    Uses ``ES(p) >= (p - p0) P_p(L <= p0)`` at ``p = 1/2`` for a few ``p0``,
    with ``L`` the randomized bound (whose shortage is never larger than
    Clopper-Pearson's). Costs O(n) per probe, no quadrature.
    """
    n = check_n(n)
    alpha = check_alpha(alpha)
    lgc = log_binom_row(n)
    best = 0.0
    for c in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        p0 = 0.5 - c * 0.5 / math.sqrt(n)
        if p0 <= 0.0:
            continue
        ts = kernels.t_star(p0, n, alpha, lgc)
        best = max(best, (0.5 - p0) * kernels.statistic_cdf(ts, n, 0.5, lgc))
    return best


def plan_sample_size(alpha: float, mes_target: float, method=Method.UMA, n_cap: int = DEFAULT_N_CAP,
                     tol: float = PLAN_MES_TOL) -> int:
    """Smallest ``n`` whose MES does not exceed ``mes_target``.

    Exponential search for a bracket, then integer bisection; relies on MES
    decreasing in ``n``. The comparison uses the branch-and-bound estimate
    computed to ``tol``.
    """
    alpha = check_alpha(alpha)
    method = _method(method)
    mes_target = float(mes_target)
    if not 0.0 < mes_target < 1.0:
        raise DomainError(f"mes_target must lie in (0, 1), got {mes_target}")

    def ok(n: int) -> bool:
        return max_expected_shortage(n, alpha, method, tol).mes <= mes_target

    if mes_lower_estimate(n_cap, alpha) > mes_target:
        raise CapacityError(f"MES target {mes_target} unreachable with n <= {n_cap}")
    if ok(1):
        return 1
    lo, hi = 1, 2
    while not ok(hi):
        lo = hi
        if hi >= n_cap:
            raise CapacityError(f"MES target {mes_target} unreachable with n <= {n_cap}")
        hi = min(2 * hi, n_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def mes_curve(ns, alpha: float, method=Method.UMA, tol: float = DEFAULT_MES_TOL) -> list[MesResult]:
    return [max_expected_shortage(int(n), alpha, method, tol) for n in ns]
