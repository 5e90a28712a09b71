"""Vectorized numpy implementations of the kernel set.

Same names and signatures as ``_jit``; loops over trials or abscissae are
replaced by array operations over a (points x support) matrix.
"""

from __future__ import annotations

import math

import numpy as np

from ..quadrature import adaptive_simpson, panel_edges

_CHUNK = 4096


def _pmf_matrix(n: int, p: np.ndarray, lgc: np.ndarray) -> np.ndarray:
    """Rows are bin(0..n, n, p_i)."""
    p = np.asarray(p, dtype=float).reshape(-1)
    k = np.arange(n + 1)
    inner = (p > 0.0) & (p < 1.0)
    out = np.zeros((p.size, n + 1))
    if inner.any():
        pi = p[inner]
        logs = lgc[None, :] + k[None, :] * np.log(pi)[:, None] + (n - k)[None, :] * np.log1p(-pi)[:, None]
        out[inner] = np.exp(logs)
    out[p <= 0.0, 0] = 1.0
    out[p >= 1.0, n] = 1.0
    return out


def _cdf_matrix(n, p, lgc):
    # column j holds Bin(j - 1, n, p), so column 0 is the empty sum
    pm = _pmf_matrix(n, p, lgc)
    cum = np.zeros((pm.shape[0], n + 2))
    np.cumsum(pm, axis=1, out=cum[:, 1:])
    return np.minimum(cum, 1.0), pm


def binom_pmf(k, n, p, lgc):
    if k < 0 or k > n:
        return 0.0
    return float(_pmf_matrix(n, np.array([p]), lgc)[0, k])


def binom_cdf(k, n, p, lgc):
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    cum, _ = _cdf_matrix(n, np.array([p]), lgc)
    return float(cum[0, k + 1])


def _statistic_cdf_vec(t, n, p, lgc):
    t = np.broadcast_to(np.asarray(t, dtype=float), np.shape(p)).reshape(-1)
    p = np.asarray(p, dtype=float).reshape(-1)
    out = np.where(t >= n + 1.0, 1.0, 0.0)
    inner = (t > 0.0) & (t < n + 1.0)
    if inner.any():
        ti = t[inner]
        fl = np.floor(ti)
        m = fl.astype(np.int64)
        cum, pm = _cdf_matrix(n, p[inner], lgc)
        rows = np.arange(ti.size)
        out[inner] = np.minimum(cum[rows, m] + (ti - fl) * pm[rows, m], 1.0)
    return out


def statistic_cdf(t, n, p, lgc):
    return float(_statistic_cdf_vec(np.array([t]), n, np.array([p]), lgc)[0])


def _uma_chunk(t, n, alpha, lgc, tol, maxiter):
    c = 1.0 - alpha
    out = np.empty(t.size)
    lower = t <= c
    upper = t >= n + c
    out[lower] = 0.0
    out[upper] = 1.0
    inner = ~(lower | upper)
    ti = t[inner]
    lo = np.zeros(ti.size)
    hi = np.ones(ti.size)
    for _ in range(maxiter):
        if ti.size == 0 or np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        above = _statistic_cdf_vec(ti, n, mid, lgc) > c
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out[inner] = 0.5 * (lo + hi)
    return out


def uma_bounds(t, n, alpha, lgc, tol, maxiter):
    t = np.asarray(t, dtype=float)
    out = np.empty(t.size)
    for s in range(0, t.size, _CHUNK):
        out[s:s + _CHUNK] = _uma_chunk(t[s:s + _CHUNK], n, alpha, lgc, tol, maxiter)
    return out


def _t_star_vec(p0, n, alpha, lgc):
    c = 1.0 - alpha
    p0 = np.asarray(p0, dtype=float).reshape(-1)
    cum, pm = _cdf_matrix(n, p0, lgc)
    # smallest m with Bin(m) >= c, i.e. cum[:, m + 1] >= c
    reach = cum[:, 1:] >= c
    reach[:, n] = True
    m = np.argmax(reach, axis=1)
    rows = np.arange(p0.size)
    pmm = pm[rows, m]
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(pmm > 0.0, (c - cum[rows, m]) / pmm, 1.0)
    out = m + np.clip(frac, 0.0, 1.0)
    out = np.where(p0 <= 0.0, c, out)
    return np.where(p0 >= 1.0, n + c, out)


def t_star(p0, n, alpha, lgc):
    return float(_t_star_vec(np.array([p0]), n, alpha, lgc)[0])


def es_integrand(p0, p, n, alpha, lgc):
    ts = _t_star_vec(p0, n, alpha, lgc)
    return _statistic_cdf_vec(ts, n, np.full(ts.size, p), lgc)


def _seg_frac_vec(p0, m, n, alpha, lgc):
    cum, pm = _cdf_matrix(n, p0, lgc)
    rows = np.arange(np.size(p0))
    pmm = pm[rows, m]
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(pmm > 0.0, (1.0 - alpha - cum[rows, m]) / pmm, 1.0)
    return np.clip(frac, 0.0, 1.0)


def es_uma_direct(p, n, alpha, lgc, bps, rtol):
    if p <= 0.0:
        return 0.0
    edges = panel_edges(bps, 0.0, p, 64)
    return adaptive_simpson(lambda x: es_integrand(x, p, n, alpha, lgc), edges, rtol=rtol, atol=1e-300)


def _seg_integral(m, lo, hi, n, alpha, lgc, rtol, atol):
    return adaptive_simpson(
        lambda x: _seg_frac_vec(x, m, n, alpha, lgc),
        [lo, 0.5 * (lo + hi), hi], rtol=rtol, atol=atol,
    )


def segment_integrals(n, alpha, lgc, bps, rtol):
    out = np.zeros(n + 1)
    for m in range(n + 1):
        if bps[m + 1] > bps[m]:
            out[m] = _seg_integral(m, bps[m], bps[m + 1], n, alpha, lgc, rtol, 1e-300)
    return out


def es_mixed_uma(p1, p2, n, alpha, lgc, bps, seg_int, rtol):
    if p1 <= 0.0:
        return 0.0
    cum, pm = _cdf_matrix(n, np.array([p2]), lgc)
    cum, pm = cum[0, :n + 1], pm[0]
    lo = bps[:n + 1]
    hi = bps[1:n + 2]
    full = hi <= p1
    total = float(np.sum(cum[full] * (hi[full] - lo[full]) + pm[full] * seg_int[full]))
    part = np.nonzero((lo < p1) & (hi > p1))[0]
    for m in part:
        g = _seg_integral(int(m), lo[m], p1, n, alpha, lgc, 0.0, rtol * max(seg_int[m], 1e-300))
        total += cum[m] * (p1 - lo[m]) + pm[m] * g
    return total


def es_mixed_cp(p1, p2, n, bps, lgc):
    if p1 <= 0.0:
        return 0.0
    cum, _ = _cdf_matrix(n, np.array([p2]), lgc)
    cdf = cum[0, 1:]  # Bin(k, n, p2) for k = 0..n
    lo = bps[:n + 1]
    hi = np.minimum(bps[1:n + 2], p1)
    seg = np.clip(hi - lo, 0.0, None)
    return float(np.sum(cdf * seg))


def ks_minus_cdf(eps, n, lgc):
    if eps >= 1.0:
        return 1.0
    if eps <= 0.0:
        return 0.0
    kmax = int(math.floor(n * (1.0 - eps)))
    k = np.arange(1, kmax + 1)
    base = (n - k) / n - eps
    keep = base > 0.0
    k, base = k[keep], base[keep]
    lterm = lgc[k] + (n - k) * np.log(base) + (k - 1) * np.log(eps + k / n) + math.log(eps)
    terms = np.concatenate([[math.exp(n * math.log1p(-eps))], np.exp(lterm)])
    tail = math.fsum(terms)
    return min(max(1.0 - tail, 0.0), 1.0)
