"""Numba switch.

Set ``LAMESL2_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy.
The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("LAMESL2_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _numba = None

USE_NUMBA = _numba is not None and not DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity otherwise.

    The undecorated function stays reachable as ``.py_func`` in both modes so
    benchmarks can time the two paths side by side.
    """
    kwargs.setdefault("cache", True)

    def wrap(fn):
        if USE_NUMBA:
            return _numba.njit(**kwargs)(fn)
        fn.py_func = fn
        return fn

    if args and callable(args[0]):
        return wrap(args[0])
    return wrap


if USE_NUMBA:
    # the bundled TBB is often too old; skip it instead of warning on every run
    _numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    prange = _numba.prange
else:
    prange = range
