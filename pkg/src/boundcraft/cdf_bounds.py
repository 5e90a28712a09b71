"""One-sided confidence bands on the CDF of a continuous reward.

The offset added to the empirical CDF comes either from the exact
finite-sample distribution of the one-sided Kolmogorov-Smirnov statistic
``D_n^- = sup_x F(x) - F_n(x)`` (Birnbaum-Tingey) or from the DKW
inequality. The KS offset is never larger.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .binomial import check_alpha, check_n, log_binom_row
from .errors import CapacityError, DomainError

EPS_TOL = 1e-10
_BRACKET = (1e-12, 1.0 - 1e-12)
# slack on the 1 - alpha comparison used when planning
_PLAN_SLACK = 1e-12


class BandSide(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class BandMethod(str, enum.Enum):
    KS = "ks"
    DKW = "dkw"


def _band_method(method) -> BandMethod:
    try:
        return BandMethod(method)
    except ValueError:
        raise DomainError(f"unknown band method {method!r}; expected 'ks' or 'dkw'") from None


def ks_minus_cdf(epsilon: float, n: int) -> float:
    """P(D_n^- <= epsilon) for a continuous parent distribution."""
    n = check_n(n)
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return float(kernels.ks_minus_cdf(epsilon, n, log_binom_row(n)))


@lru_cache(maxsize=4096)
def _eps_star(n: int, alpha: float) -> float:
    lgc = log_binom_row(n)
    target = 1.0 - alpha
    lo, hi = _BRACKET
    for _ in range(200):
        if hi - lo <= EPS_TOL:
            break
        mid = 0.5 * (lo + hi)
        if kernels.ks_minus_cdf(mid, n, lgc) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_epsilon_star(n: int, alpha: float) -> float:
    """Smallest offset with P(D_n^- <= offset) = 1 - alpha, by bisection."""
    return _eps_star(check_n(n), check_alpha(alpha))


def dkw_epsilon(n: int, alpha: float) -> float:
    """DKW offset ``sqrt(-ln(alpha) / (2 n))``, clipped to 1."""
    n = check_n(n)
    alpha = check_alpha(alpha)
    return min(math.sqrt(-math.log(alpha) / (2.0 * n)), 1.0)


def band_epsilon(n: int, alpha: float, method=BandMethod.KS) -> float:
    if _band_method(method) is BandMethod.KS:
        return solve_epsilon_star(n, alpha)
    return dkw_epsilon(n, alpha)


@dataclass(frozen=True, eq=False)
class EmpiricalCdf:
    """Right-continuous step function ``F_n(x) = #(samples <= x) / n``."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float).reshape(-1))
        if s.size == 0:
            raise DomainError("empirical CDF needs at least one sample")
        if not np.all(np.isfinite(s)):
            raise DomainError("samples must be finite")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def __call__(self, x):
        counts = np.searchsorted(self.samples, x, side="right")
        return counts / self.n

    def breakpoints(self) -> np.ndarray:
        return np.unique(self.samples)


@dataclass(frozen=True, eq=False)
class CdfBand:
    base: EmpiricalCdf
    epsilon_star: float
    side: BandSide = BandSide.UPPER
    alpha: float | None = None
    method: BandMethod = BandMethod.KS

    def __post_init__(self):
        if not 0.0 <= self.epsilon_star <= 1.0:
            raise DomainError(f"epsilon_star must lie in [0, 1], got {self.epsilon_star}")
        object.__setattr__(self, "side", BandSide(self.side))
        object.__setattr__(self, "method", _band_method(self.method))

    @property
    def n(self) -> int:
        return self.base.n

    def __call__(self, x):
        f = self.base(x)
        if self.side is BandSide.UPPER:
            return np.minimum(f + self.epsilon_star, 1.0)
        return np.maximum(f - self.epsilon_star, 0.0)

    def header(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "epsilon_star": self.epsilon_star,
            "method": self.method.value,
            "side": self.side.value,
        }

    def to_csv(self, fh=None) -> str:
        """Band at the step breakpoints as CSV preceded by a ``# {json}`` header."""
        xs = self.base.breakpoints()
        out = io.StringIO()
        out.write("# " + json.dumps(self.header()) + "\n")
        out.write("x,empirical_cdf,band_value\n")
        for x, f, b in zip(xs, self.base(xs), self(xs)):
            out.write(f"{float(x)!r},{float(f)!r},{float(b)!r}\n")
        text = out.getvalue()
        if fh is not None:
            fh.write(text)
        return text


def read_band_csv(text: str) -> tuple[dict, np.ndarray]:
    """Parse :meth:`CdfBand.to_csv` output into ``(header, rows)``."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise DomainError("band CSV must start with a '# {json}' header line")
    header = json.loads(lines[0][2:])
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:] if ln.strip()])
    return header, rows.reshape(-1, 3)


def _band(samples, alpha, method, side) -> CdfBand:
    alpha = check_alpha(alpha)
    method = _band_method(method)
    base = EmpiricalCdf(samples)
    return CdfBand(base, band_epsilon(base.n, alpha, method), side, alpha, method)


def upper_band(samples, alpha: float, method=BandMethod.KS) -> CdfBand:
    """``min(F_n + eps, 1)``: covers the true CDF everywhere w.p. >= 1 - alpha.

    This is the worst-case performance distribution consistent with the data.
    """
    return _band(samples, alpha, method, BandSide.UPPER)


def lower_band(samples, alpha: float, method=BandMethod.KS) -> CdfBand:
    """``max(F_n - eps, 0)``; ``D_n^+`` shares the distribution of ``D_n^-``."""
    return _band(samples, alpha, method, BandSide.LOWER)


def _check_support(band: CdfBand, support) -> tuple[float, float]:
    a, b = (float(v) for v in support)
    if not a < b:
        raise DomainError(f"support must satisfy a < b, got [{a}, {b}]")
    s = band.base.samples
    if s[0] < a or s[-1] > b:
        raise DomainError(f"samples fall outside the support [{a}, {b}]")
    return a, b


def band_mean_bound(band: CdfBand, support) -> float:
    """Mean of the distribution on ``[a, b]`` whose CDF is the band.

    Lowest consistent mean for an upper band, highest for a lower band.
    Equals ``b - int_a^b band(x) dx``, integrated exactly over the steps.
    """
    a, b = _check_support(band, support)
    xs = band.base.breakpoints()
    knots = np.concatenate([[a], xs, [b]])
    widths = np.diff(knots)
    # band value on [knots[i], knots[i+1])
    vals = band(knots[:-1])
    return float(b - np.sum(widths * vals))


def band_quantile_bound(band: CdfBand, q: float, support=None) -> float:
    """``inf{x : band(x) >= q}``.

    For an upper band this is the worst-case q-quantile. When the band
    reaches ``q`` before the first sample the support minimum is returned,
    or ``-inf`` without a support; a lower band that never reaches ``q``
    gives the support maximum or ``+inf``.
    """
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if support is not None:
        support = _check_support(band, support)
    n = band.n
    eps = band.epsilon_star
    shift = eps if band.side is BandSide.UPPER else -eps

    if shift >= q:
        return support[0] if support is not None else -math.inf
    # smallest i with i / n + shift >= q
    i = max(int(math.ceil((q - shift) * n)), 1)
    while i > 1 and (i - 1) / n + shift >= q:
        i -= 1
    while i <= n and i / n + shift < q:
        i += 1
    if i > n:
        return support[1] if support is not None else math.inf
    return float(band.base.samples[i - 1])


def plan_epsilon_sample_size(alpha: float, epsilon_target: float, method=BandMethod.KS,
                             n_cap: int = 10**6) -> int:
    """Smallest ``n`` whose band offset does not exceed ``epsilon_target``."""
    alpha = check_alpha(alpha)
    method = _band_method(method)
    eps = float(epsilon_target)
    if not 0.0 < eps < 1.0:
        raise DomainError(f"epsilon_target must lie in (0, 1), got {eps}")

    if method is BandMethod.DKW:
        n = max(1, math.ceil(-math.log(alpha) / (2.0 * eps * eps)))
        while n > 1 and dkw_epsilon(n - 1, alpha) <= eps:
            n -= 1
        while dkw_epsilon(n, alpha) > eps:
            n += 1
        if n > n_cap:
            raise CapacityError(f"epsilon target {eps} unreachable with n <= {n_cap}")
        return n

    def ok(n: int) -> bool:
        # eps* <= target  <=>  P(D_n^- <= target) >= 1 - alpha
        return ks_minus_cdf(eps, n) >= 1.0 - alpha - _PLAN_SLACK

    if not ok(n_cap):
        raise CapacityError(f"epsilon target {eps} unreachable with n <= {n_cap}")
    if ok(1):
        return 1
    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, min(2 * hi, n_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
