"""Backend selection for the numeric kernels.

Set ``BOUNDCRAFT_DISABLE_NUMBA=1`` before import to force the vectorized
numpy path. The numba path is used whenever numba imports cleanly.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("BOUNDCRAFT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("disabled by BOUNDCRAFT_DISABLE_NUMBA")
    import numba as _numba
    HAVE_NUMBA = True
except ImportError:
    _numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"

NUMBA_OPTS = {"cache": True, "nogil": True}


def njit(func):
    """Compile ``func`` with numba if enabled, else return it unchanged."""
    if _numba is None:
        return func
    return _numba.njit(**NUMBA_OPTS)(func)
