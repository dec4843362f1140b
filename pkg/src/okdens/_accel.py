"""Backend selection for the compiled kernels.

All hot loops in :mod:`okdens.kernels` are written once and decorated with
``@njit``.  At import time this module decides whether ``njit`` is numba's
compiler or a transparent pass-through:

* ``OKDENS_NO_NUMBA=1`` in the environment forces the pure-python/numpy path;
* an unavailable numba falls back to the same path with a warning.

The pure path executes the identical kernel source on numpy uint64/int64
scalars, whose wrapping arithmetic matches the compiled machine-integer
semantics, so both backends produce bit-identical streams and verdicts (the
test suite pins this).  Only speed differs.
"""

import functools
import os
import warnings

import numpy as np

NUMBA_ENV_FLAG = "OKDENS_NO_NUMBA"

HAS_NUMBA = False

if os.environ.get(NUMBA_ENV_FLAG, "").strip() not in ("", "0"):
    numba = None
else:
    try:
        import numba
        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba installed
        numba = None
        warnings.warn("numba unavailable; falling back to the slow pure-python kernels")


def _pure(fn):
    # uint64 wrap-around is intentional in the PRNG kernels; numba is silent
    # about it, so the interpreted path must be too
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(over="ignore"):
            return fn(*args, **kwargs)
    return wrapper


def njit(*args, **kwargs):
    """numba.njit when the compiled backend is active, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return _pure(args[0])
    return _pure
