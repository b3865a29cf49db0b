"""Numba switch.

Kernels are written once as plain Python loops and compiled with numba when
it is importable and ``DRGKIT_NUMBA`` is not set to ``0``/``false``/``off``.
Each kernel module also ships a vectorised numpy implementation that is used
when compilation is disabled.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("DRGKIT_NUMBA", "1").strip().lower()

try:  # pragma: no cover - depends on environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in {"0", "false", "off", "no"}


def njit(func):
    """Compile ``func`` in nopython mode, or return it untouched if numba is off."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
