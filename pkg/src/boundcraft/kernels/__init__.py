"""Hot numeric kernels, dispatched to numba or numpy.

The backend is fixed at import time; see :mod:`boundcraft._accel`.
"""

from .._accel import BACKEND, HAVE_NUMBA

if HAVE_NUMBA:
    from . import _jit as _impl
else:
    from . import _numpy as _impl

binom_pmf = _impl.binom_pmf
binom_cdf = _impl.binom_cdf
statistic_cdf = _impl.statistic_cdf
uma_bounds = _impl.uma_bounds
t_star = _impl.t_star
es_integrand = _impl.es_integrand
es_uma_direct = _impl.es_uma_direct
segment_integrals = _impl.segment_integrals
es_mixed_uma = _impl.es_mixed_uma
es_mixed_cp = _impl.es_mixed_cp
ks_minus_cdf = _impl.ks_minus_cdf

__all__ = [
    "BACKEND",
    "binom_pmf",
    "binom_cdf",
    "statistic_cdf",
    "uma_bounds",
    "t_star",
    "es_integrand",
    "es_uma_direct",
    "segment_integrals",
    "es_mixed_uma",
    "es_mixed_cp",
    "ks_minus_cdf",
]
