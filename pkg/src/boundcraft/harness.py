"""Monte Carlo validation of coverage, shortage and dominance claims.

Random streams
--------------
Trials are cut into fixed blocks of ``BLOCK`` consecutive trials. Block
``b`` of a run with master seed ``s`` draws from
``Generator(PCG64(SeedSequence(s, spawn_key=(b,))))``. The block layout does
not depend on ``workers``, and per-block partial sums are reduced in block
order, so reports are bit-identical for any degree of parallelism.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .binomial import check_alpha, check_n, check_p
from .cdf_bounds import BandMethod, BandSide, band_epsilon, dkw_epsilon, solve_epsilon_star
from .clopper_pearson import cp_breakpoints
from .errors import DomainError
from .tightness import DEFAULT_MES_TOL, expected_shortage_cp, expected_shortage_uma, max_expected_shortage
from .uma import Method, uma_bounds

BLOCK = 4096
DEFAULT_TRIALS = 10_000


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _blocks(trials: int):
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(math.ceil(trials / BLOCK))]


def _run_blocks(fn, trials: int, workers: int):
    blocks = _blocks(trials)
    if workers <= 1 or len(blocks) == 1:
        parts = [fn(b, size) for b, size in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda bs: fn(*bs), blocks))
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def _check_trials(trials: int) -> int:
    if int(trials) < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    return int(trials)


@dataclass(frozen=True)
class CoverageReport:
    trials: int
    empirical_coverage: float
    empirical_mean_shortage: float | None
    theory_confidence: float
    theory_es: float | None
    seed: int
    config: dict = field(default_factory=dict)
    coverage_se: float = 0.0
    shortage_se: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def simulate_binary_coverage(p_true: float, n: int, alpha: float, method=Method.UMA,
                             trials: int = DEFAULT_TRIALS, seed: int = 0,
                             workers: int = 1) -> CoverageReport:
    """Draw ``k ~ Binomial(n, p_true)`` and ``u``, bound, and score each trial.

    Coverage is the frequency of ``bound <= p_true``; shortage is
    ``max(p_true - bound, 0)``.
    """
    p_true = check_p(p_true, "p_true")
    n = check_n(n)
    alpha = check_alpha(alpha)
    method = Method(method)
    trials = _check_trials(trials)
    bps = cp_breakpoints(n, alpha)

    def block(b, size):
        rng = block_rng(seed, b)
        k = rng.binomial(n, p_true, size=size)
        u = rng.random(size)
        if method is Method.UMA:
            lo = uma_bounds(k + u, n, alpha)
        else:
            lo = bps[k]
        short = np.maximum(p_true - lo, 0.0)
        return np.array([np.count_nonzero(lo <= p_true), short.sum(), np.square(short).sum()])

    covered, s1, s2 = _run_blocks(block, trials, workers)
    cov = covered / trials
    mean = s1 / trials
    var = max(s2 / trials - mean * mean, 0.0)
    es = expected_shortage_uma(p_true, n, alpha) if method is Method.UMA else expected_shortage_cp(p_true, n, alpha)
    return CoverageReport(
        trials=trials,
        empirical_coverage=float(cov),
        empirical_mean_shortage=float(mean),
        theory_confidence=1.0 - alpha,
        theory_es=float(es),
        seed=seed,
        config={"kind": "binary", "p_true": p_true, "n": n, "alpha": alpha, "method": method.value},
        coverage_se=math.sqrt(cov * (1.0 - cov) / trials),
        shortage_se=math.sqrt(var / trials),
    )


# true CDF and its left limit for each generator
def _uniform(rng, shape):
    return rng.random(shape)


def _normal(rng, shape):
    return rng.standard_normal(shape)


def _exponential(rng, shape):
    return rng.standard_exponential(shape)


def _two_point(rng, shape):
    return (rng.random(shape) < 0.5).astype(float)


_erf = np.vectorize(math.erf, otypes=[float])


def _normal_cdf(x):
    return 0.5 * (1.0 + _erf(np.asarray(x) / math.sqrt(2.0)))


DISTRIBUTIONS = {
    # name: (sampler, F(x), F(x-))
    "uniform": (_uniform, lambda x: np.clip(x, 0.0, 1.0), lambda x: np.clip(x, 0.0, 1.0)),
    "normal": (_normal, _normal_cdf, _normal_cdf),
    "exponential": (_exponential, lambda x: -np.expm1(-np.maximum(x, 0.0)),
                    lambda x: -np.expm1(-np.maximum(x, 0.0))),
    "two-point": (_two_point, lambda x: np.where(x >= 1.0, 1.0, np.where(x >= 0.0, 0.5, 0.0)),
                  lambda x: np.where(x > 1.0, 1.0, np.where(x > 0.0, 0.5, 0.0))),
}


def one_sided_deviation(sorted_rows: np.ndarray, cdf, cdf_left, side=BandSide.UPPER) -> np.ndarray:
    """Exact ``sup_x F - F_n`` (upper) or ``sup_x F_n - F`` (lower) per row.

    Both sups are attained at the sample points: just below each point for
    the upper side (left limit of ``F`` against ``#(X < x) / n``) and at each
    point for the lower side. Ties are counted with multiplicity.
    """
    s = np.asarray(sorted_rows, dtype=float)
    n = s.shape[1]
    j = np.arange(n)
    is_new = np.ones_like(s, dtype=bool)
    is_new[:, 1:] = s[:, 1:] != s[:, :-1]
    first = np.maximum.accumulate(np.where(is_new, j, 0), axis=1)  # #(X < x_j)
    if BandSide(side) is BandSide.UPPER:
        dev = cdf_left(s) - first / n
    else:
        is_last = np.ones_like(s, dtype=bool)
        is_last[:, :-1] = s[:, 1:] != s[:, :-1]
        last = np.minimum.accumulate(np.where(is_last, j, n - 1)[:, ::-1], axis=1)[:, ::-1]
        dev = (last + 1) / n - cdf(s)
    return np.maximum(dev.max(axis=1), 0.0)


def simulate_cdf_coverage(dist: str, n: int, alpha: float, method=BandMethod.KS,
                          trials: int = DEFAULT_TRIALS, seed: int = 0, workers: int = 1,
                          side=BandSide.UPPER) -> CoverageReport:
    """Frequency with which the band contains the true CDF at every ``x``."""
    if dist not in DISTRIBUTIONS:
        raise DomainError(f"unknown distribution {dist!r}; expected one of {sorted(DISTRIBUTIONS)}")
    n = check_n(n)
    alpha = check_alpha(alpha)
    method = BandMethod(method)
    side = BandSide(side)
    trials = _check_trials(trials)
    sampler, cdf, cdf_left = DISTRIBUTIONS[dist]
    eps = band_epsilon(n, alpha, method)

    def block(b, size):
        rng = block_rng(seed, b)
        rows = np.sort(sampler(rng, (size, n)), axis=1)
        dev = one_sided_deviation(rows, cdf, cdf_left, side)
        return np.array([np.count_nonzero(dev <= eps)])

    (covered,) = _run_blocks(block, trials, workers)
    cov = covered / trials
    return CoverageReport(
        trials=trials,
        empirical_coverage=float(cov),
        empirical_mean_shortage=None,
        theory_confidence=1.0 - alpha,
        theory_es=None,
        seed=seed,
        config={"kind": "continuous", "dist": dist, "n": n, "alpha": alpha,
                "method": method.value, "side": side.value, "epsilon_star": eps},
        coverage_se=math.sqrt(cov * (1.0 - cov) / trials),
    )


@dataclass(frozen=True)
class ComparisonSimReport:
    trials: int
    disjoint_rate: float
    joint_coverage: float
    seed: int
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def simulate_comparison(p_a: float, p_b: float, n: int, joint_alpha: float,
                        trials: int = DEFAULT_TRIALS, seed: int = 0, workers: int = 1) -> ComparisonSimReport:
    """Rate of "A beats B" verdicts and of joint bound validity."""
    p_a = check_p(p_a, "p_a")
    p_b = check_p(p_b, "p_b")
    n = check_n(n)
    joint_alpha = check_alpha(joint_alpha)
    trials = _check_trials(trials)
    half = joint_alpha / 2.0

    def block(b, size):
        rng = block_rng(seed, b)
        k_a = rng.binomial(n, p_a, size=size)
        k_b = rng.binomial(n, p_b, size=size)
        u = rng.random((2, size))
        lo_a = uma_bounds(k_a + u[0], n, half)
        ub_b = 1.0 - uma_bounds((n - k_b) + u[1], n, half)
        return np.array([np.count_nonzero(ub_b < lo_a),
                         np.count_nonzero((lo_a <= p_a) & (p_b <= ub_b))])

    disjoint, joint = _run_blocks(block, trials, workers)
    return ComparisonSimReport(
        trials=trials,
        disjoint_rate=float(disjoint / trials),
        joint_coverage=float(joint / trials),
        seed=seed,
        config={"p_a": p_a, "p_b": p_b, "n": n, "joint_alpha": joint_alpha},
    )


@dataclass(frozen=True)
class CurveRow:
    method: str
    n: int
    alpha: float
    value: float


CURVE_METHODS = ("uma", "cp", "ks", "dkw")


def sweep_tightness_curves(alpha_set, n_set, methods=CURVE_METHODS,
                           tol: float = DEFAULT_MES_TOL) -> list[CurveRow]:
    """MES (uma, cp) or band offset (ks, dkw) for every (method, n, alpha)."""
    alpha_set = [check_alpha(a) for a in alpha_set]
    n_set = [check_n(int(n)) for n in n_set]
    if not alpha_set or not n_set or not methods:
        raise DomainError("alpha_set, n_set and methods must be non-empty")
    rows = []
    for method in methods:
        if method not in CURVE_METHODS:
            raise DomainError(f"unknown curve method {method!r}")
        for alpha in alpha_set:
            for n in n_set:
                if method in ("uma", "cp"):
                    value = max_expected_shortage(n, alpha, method, tol).mes
                elif method == "ks":
                    value = solve_epsilon_star(n, alpha)
                else:
                    value = dkw_epsilon(n, alpha)
                rows.append(CurveRow(method, n, alpha, float(value)))
    return rows


def write_curves_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["method", "n", "alpha", "value"])
    for r in rows:
        w.writerow([r.method, r.n, repr(r.alpha), repr(r.value)])
