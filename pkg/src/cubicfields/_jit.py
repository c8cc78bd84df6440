"""Numba switch.

Kernels are compiled with numba unless ``CUBICFIELDS_DISABLE_NUMBA`` is set to
a truthy value or numba cannot be imported, in which case the pure-numpy
implementations in :mod:`cubicfields.kernels` are used.
"""

import os

_FLAG = os.environ.get("CUBICFIELDS_DISABLE_NUMBA", "").strip().lower()

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _FLAG in ("", "0", "false", "no")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
