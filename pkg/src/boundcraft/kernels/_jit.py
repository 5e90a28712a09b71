"""Scalar-loop kernels, compiled with numba when it is enabled.

Every function takes ``lgc``, the row of log binomial coefficients
``ln C(n, k)`` for ``k = 0..n``, so that no kernel ever calls lgamma in an
inner loop.
"""

from __future__ import annotations

import math

import numpy as np

from .._accel import njit

_MAX_DEPTH = 48
# refinement stops once the Richardson correction is at rounding level
_ROUNDOFF = 64.0 * 2.220446049250313e-16


@njit
def binom_pmf(k, n, p, lgc):
    if k < 0 or k > n:
        return 0.0
    if p <= 0.0:
        return 1.0 if k == 0 else 0.0
    if p >= 1.0:
        return 1.0 if k == n else 0.0
    return math.exp(lgc[k] + k * math.log(p) + (n - k) * math.log1p(-p))


@njit
def binom_cdf(k, n, p, lgc):
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    lp = math.log(p)
    lq = math.log1p(-p)
    s = 0.0
    for j in range(k + 1):
        s += math.exp(lgc[j] + j * lp + (n - j) * lq)
    return min(s, 1.0)


@njit
def statistic_cdf(t, n, p, lgc):
    if t <= 0.0:
        return 0.0
    if t >= n + 1.0:
        return 1.0
    fl = math.floor(t)
    m = int(fl)
    return min(binom_cdf(m - 1, n, p, lgc) + (t - fl) * binom_pmf(m, n, p, lgc), 1.0)


@njit
def _uma_one(t, n, alpha, lgc, tol, maxiter):
    c = 1.0 - alpha
    if t <= c:
        return 0.0
    if t >= n + c:
        return 1.0
    lo = 0.0
    hi = 1.0
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if statistic_cdf(t, n, mid, lgc) > c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@njit
def uma_bounds(t, n, alpha, lgc, tol, maxiter):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = _uma_one(t[i], n, alpha, lgc, tol, maxiter)
    return out


@njit
def t_star(p0, n, alpha, lgc):
    c = 1.0 - alpha
    if p0 <= 0.0:
        return c
    if p0 >= 1.0:
        return n + c
    lp = math.log(p0)
    lq = math.log1p(-p0)
    cum = 0.0
    for m in range(n + 1):
        pm = math.exp(lgc[m] + m * lp + (n - m) * lq)
        if (cum + pm >= c or m == n) and pm > 0.0:
            frac = (c - cum) / pm
            if frac < 0.0:
                frac = 0.0
            elif frac > 1.0:
                frac = 1.0
            return m + frac
        cum += pm
    return n + c


@njit
def _es_point(p0, p, n, alpha, lgc):
    return statistic_cdf(t_star(p0, n, alpha, lgc), n, p, lgc)


@njit
def es_integrand(p0, p, n, alpha, lgc):
    out = np.empty(p0.shape[0])
    for i in range(p0.shape[0]):
        out[i] = _es_point(p0[i], p, n, alpha, lgc)
    return out


@njit
def _seg_frac(p0, m, n, alpha, lgc):
    # t*(p0) - m for p0 inside the segment where floor(t*) = m
    pm = binom_pmf(m, n, p0, lgc)
    if pm <= 0.0:
        return 1.0
    frac = (1.0 - alpha - binom_cdf(m - 1, n, p0, lgc)) / pm
    if frac < 0.0:
        return 0.0
    if frac > 1.0:
        return 1.0
    return frac


@njit
def _f(kind, x, p, m, n, alpha, lgc):
    if kind == 0:
        return _es_point(x, p, n, alpha, lgc)
    return _seg_frac(x, m, n, alpha, lgc)


@njit
def _simpson_panel(kind, a, b, fa, fm, fb, whole, tol, p, m, n, alpha, lgc):
    # depth-first adaptive Simpson with an explicit stack
    size = 2 * _MAX_DEPTH + 4
    sa = np.empty(size)
    sb = np.empty(size)
    sfa = np.empty(size)
    sfm = np.empty(size)
    sfb = np.empty(size)
    sw = np.empty(size)
    st = np.empty(size)
    sd = np.empty(size, dtype=np.int64)
    sp = 0
    sa[0] = a
    sb[0] = b
    sfa[0] = fa
    sfm[0] = fm
    sfb[0] = fb
    sw[0] = whole
    st[0] = tol
    sd[0] = 0
    sp = 1
    total = 0.0
    while sp > 0:
        sp -= 1
        a_ = sa[sp]
        b_ = sb[sp]
        fa_ = sfa[sp]
        fm_ = sfm[sp]
        fb_ = sfb[sp]
        w_ = sw[sp]
        t_ = st[sp]
        d_ = sd[sp]
        c_ = 0.5 * (a_ + b_)
        fd = _f(kind, 0.5 * (a_ + c_), p, m, n, alpha, lgc)
        fe = _f(kind, 0.5 * (c_ + b_), p, m, n, alpha, lgc)
        left = (c_ - a_) / 6.0 * (fa_ + 4.0 * fd + fm_)
        right = (b_ - c_) / 6.0 * (fm_ + 4.0 * fe + fb_)
        delta = left + right - w_
        noise = _ROUNDOFF * (abs(left) + abs(right))
        if d_ >= _MAX_DEPTH or abs(delta) <= max(15.0 * t_, noise):
            total += left + right + delta / 15.0
        else:
            sa[sp] = c_
            sb[sp] = b_
            sfa[sp] = fm_
            sfm[sp] = fe
            sfb[sp] = fb_
            sw[sp] = right
            st[sp] = 0.5 * t_
            sd[sp] = d_ + 1
            sp += 1
            sa[sp] = a_
            sb[sp] = c_
            sfa[sp] = fa_
            sfm[sp] = fd
            sfb[sp] = fm_
            sw[sp] = left
            st[sp] = 0.5 * t_
            sd[sp] = d_ + 1
            sp += 1
    return total


@njit
def _integrate(kind, edges, rtol, atol, p, m, n, alpha, lgc):
    npan = edges.shape[0] - 1
    fa = np.empty(npan)
    fm = np.empty(npan)
    fb = np.empty(npan)
    whole = np.empty(npan)
    coarse = 0.0
    for i in range(npan):
        a = edges[i]
        b = edges[i + 1]
        fa[i] = _f(kind, a, p, m, n, alpha, lgc)
        fm[i] = _f(kind, 0.5 * (a + b), p, m, n, alpha, lgc)
        fb[i] = _f(kind, b, p, m, n, alpha, lgc)
        whole[i] = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i])
        coarse += whole[i]
    span = edges[npan] - edges[0]
    if span <= 0.0:
        return 0.0
    tol_total = max(atol, rtol * abs(coarse))
    total = 0.0
    for i in range(npan):
        width = edges[i + 1] - edges[i]
        if width <= 0.0:
            continue
        total += _simpson_panel(kind, edges[i], edges[i + 1], fa[i], fm[i], fb[i],
                                whole[i], tol_total * (width / span), p, m, n, alpha, lgc)
    return total


@njit
def _panel_edges(breaks, lo, hi, min_panels):
    # split [lo, hi] at interior breakpoints, then subdivide each piece
    # so that at least min_panels panels cover the interval
    cuts = [lo]
    for b in breaks:
        if lo < b < hi:
            cuts.append(b)
    cuts.append(hi)
    span = hi - lo
    edges = [lo]
    for i in range(len(cuts) - 1):
        a = cuts[i]
        b = cuts[i + 1]
        k = max(1, int(math.ceil(min_panels * (b - a) / span)))
        for j in range(1, k + 1):
            edges.append(a + (b - a) * j / k)
    edges[-1] = hi
    return np.array(edges)


@njit
def es_uma_direct(p, n, alpha, lgc, bps, rtol):
    if p <= 0.0:
        return 0.0
    edges = _panel_edges(bps, 0.0, p, 64)
    return _integrate(0, edges, rtol, 1e-300, p, 0, n, alpha, lgc)


@njit
def segment_integrals(n, alpha, lgc, bps, rtol):
    # bps has length n + 2 with bps[n + 1] == 1
    out = np.zeros(n + 1)
    for m in range(n + 1):
        a = bps[m]
        b = bps[m + 1]
        if b > a:
            edges = np.array([a, 0.5 * (a + b), b])
            out[m] = _integrate(1, edges, rtol, 1e-300, 0.0, m, n, alpha, lgc)
    return out


@njit
def es_mixed_uma(p1, p2, n, alpha, lgc, bps, seg_int, rtol):
    """ES(p1, p2): nondecreasing in p1, nonincreasing in p2."""
    if p1 <= 0.0:
        return 0.0
    total = 0.0
    cum = 0.0  # Bin(m - 1, n, p2)
    for m in range(n + 1):
        lo = bps[m]
        hi = bps[m + 1]
        if lo >= p1:
            break
        pm = binom_pmf(m, n, p2, lgc)
        if hi <= p1:
            total += cum * (hi - lo) + pm * seg_int[m]
        else:
            edges = np.array([lo, 0.5 * (lo + p1), p1])
            g = _integrate(1, edges, 0.0, rtol * max(seg_int[m], 1e-300), 0.0, m, n, alpha, lgc)
            total += cum * (p1 - lo) + pm * g
        cum += pm
    return total


@njit
def es_mixed_cp(p1, p2, n, bps, lgc):
    if p1 <= 0.0:
        return 0.0
    total = 0.0
    cum = 0.0
    for k in range(n + 1):
        lo = bps[k]
        if lo >= p1:
            break
        cum += binom_pmf(k, n, p2, lgc)
        hi = min(bps[k + 1], p1)
        total += min(cum, 1.0) * (hi - lo)
    return total


@njit
def ks_minus_cdf(eps, n, lgc):
    if eps >= 1.0:
        return 1.0
    if eps <= 0.0:
        return 0.0
    log_eps = math.log(eps)
    # k = 0 term of eps * sum(w_k) simplifies to (1 - eps)^n
    s = math.exp(n * math.log1p(-eps))
    comp = 0.0
    kmax = int(math.floor(n * (1.0 - eps)))
    for k in range(1, kmax + 1):
        base = (n - k) / n - eps
        if base <= 0.0:
            if n - k > 0:
                continue
            lterm = lgc[k] + (k - 1) * math.log(eps + k / n) + log_eps
        else:
            lterm = (lgc[k] + (n - k) * math.log(base)
                     + (k - 1) * math.log(eps + k / n) + log_eps)
        term = math.exp(lterm)
        # Neumaier compensated sum
        tmp = s + term
        if abs(s) >= abs(term):
            comp += (s - tmp) + term
        else:
            comp += (term - tmp) + s
        s = tmp
    tail = s + comp
    val = 1.0 - tail
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val
