"""Time the numba kernels against the pure-numpy fallback.

Both modules are imported directly, so the env flag is irrelevant here.
When numba is absent ``_jit`` runs as plain Python and is expectedly slow.

    python3 benchmarks/bench_backends.py [--repeat 5] [--n 50]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from boundcraft._accel import HAVE_NUMBA
from boundcraft.binomial import log_binom_row
from boundcraft.clopper_pearson import cp_breakpoints
from boundcraft.kernels import _jit, _numpy


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n: int, alpha: float):
    lgc = log_binom_row(n)
    bps = cp_breakpoints(n, alpha)
    t = np.random.default_rng(0).random(100_000) * (n + 1)
    seg = _jit.segment_integrals(n, alpha, lgc, bps, 1e-8)
    p_grid = np.linspace(0.01, 1.0, 200)
    return {
        "uma_bounds (1e5 statistics)": lambda m: m.uma_bounds(t, n, alpha, lgc, 1e-10, 200),
        "es_uma_direct (20 p values)": lambda m: [m.es_uma_direct(p, n, alpha, lgc, bps, 1e-8)
                                                   for p in p_grid[::10]],
        "segment_integrals": lambda m: m.segment_integrals(n, alpha, lgc, bps, 1e-8),
        "es_mixed_uma (200 boxes)": lambda m: [m.es_mixed_uma(p, p * 0.9, n, alpha, lgc, bps, seg, 1e-8)
                                               for p in p_grid],
        "es_mixed_cp (200 boxes)": lambda m: [m.es_mixed_cp(p, p * 0.9, n, bps, lgc) for p in p_grid],
        "ks_minus_cdf (200 eps)": lambda m: [m.ks_minus_cdf(e, n, lgc) for e in np.linspace(0.01, 0.99, 200)],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--alpha", type=float, default=0.05)
    args = ap.parse_args()

    table = cases(args.n, args.alpha)
    for fn in table.values():  # compile outside the timed region
        fn(_jit)
    print(f"n = {args.n}, alpha = {args.alpha}, numba available: {HAVE_NUMBA}")
    print(f"{'kernel':<32}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, fn in table.items():
        tj = best_of(lambda: fn(_jit), args.repeat)
        tn = best_of(lambda: fn(_numpy), args.repeat)
        print(f"{name:<32}{tj * 1e3:>12.2f}{tn * 1e3:>12.2f}{tn / tj:>9.1f}x")


if __name__ == "__main__":
    main()
