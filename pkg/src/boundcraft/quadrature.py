"""Vectorized adaptive Simpson quadrature.

Panels are refined level by level rather than depth first, so every
integrand call receives a whole batch of abscissae. Used by the numpy
backend; the numba backend carries its own depth-first version.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

# refinement stops once the Richardson correction is at rounding level
_ROUNDOFF = 64.0 * np.finfo(float).eps


def adaptive_simpson(
    f: Callable[[np.ndarray], np.ndarray],
    edges,
    rtol: float = 1e-8,
    atol: float = 0.0,
    max_levels: int = 48,
) -> float:
    """Integrate ``f`` over ``[edges[0], edges[-1]]``.

    Parameters
    ----------
    f : callable
        Vectorized integrand, array in, array out.
    edges : array_like
        Sorted initial panel boundaries. Put known kinks of the integrand
        on panel boundaries.
    rtol, atol : float
        The global tolerance is ``max(atol, rtol * |coarse estimate|)``,
        shared between panels in proportion to their width.
    max_levels : int
        Panels still unconverged after this many halvings are accepted.
    """
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1]
    b = edges[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    if a.size == 0:
        return 0.0
    m = 0.5 * (a + b)
    k = a.size
    vals = f(np.concatenate([a, m, b]))
    fa, fm, fb = vals[:k], vals[k:2 * k], vals[2 * k:]
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    span = b[-1] - a[0]
    tol_total = max(atol, rtol * abs(whole.sum()))
    tol = tol_total * ((b - a) / span)

    total = 0.0
    for level in range(max_levels + 1):
        d = 0.5 * (a + m)
        e = 0.5 * (m + b)
        k = a.size
        de = f(np.concatenate([d, e]))
        fd, fe = de[:k], de[k:]
        left = (m - a) / 6.0 * (fa + 4.0 * fd + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * fe + fb)
        delta = left + right - whole
        noise = _ROUNDOFF * (np.abs(left) + np.abs(right))
        done = np.abs(delta) <= np.maximum(15.0 * tol, noise)
        if level == max_levels:
            done[:] = True
        total += float(np.sum((left + right + delta / 15.0)[done]))
        todo = ~done
        if not todo.any():
            break
        a, m, b = a[todo], m[todo], b[todo]
        fa, fm, fb = fa[todo], fm[todo], fb[todo]
        d, e = d[todo], e[todo]
        fd, fe = fd[todo], fe[todo]
        left, right, tol = left[todo], right[todo], tol[todo]
        # children: [a, m] with midpoint d, [m, b] with midpoint e
        a, m, b = np.concatenate([a, m]), np.concatenate([d, e]), np.concatenate([m, b])
        fa, fm, fb = np.concatenate([fa, fm]), np.concatenate([fd, fe]), np.concatenate([fm, fb])
        whole = np.concatenate([left, right])
        tol = np.concatenate([tol, tol]) * 0.5
    return total


def panel_edges(breaks, lo: float, hi: float, min_panels: int = 64) -> np.ndarray:
    """Panel boundaries on ``[lo, hi]`` that include every interior break."""
    breaks = np.asarray(breaks, dtype=float)
    cuts = np.concatenate([[lo], breaks[(breaks > lo) & (breaks < hi)], [hi]])
    span = hi - lo
    pieces = [np.array([lo])]
    for a, b in zip(cuts[:-1], cuts[1:]):
        k = max(1, int(np.ceil(min_panels * (b - a) / span)))
        pieces.append(a + (b - a) * np.arange(1, k + 1) / k)
    edges = np.concatenate(pieces)
    edges[-1] = hi
    return edges
