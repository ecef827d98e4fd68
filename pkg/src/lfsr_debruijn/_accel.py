"""JIT switch for the hot kernels.

Set ``LFSR_DEBRUIJN_NO_JIT=1`` to run every kernel on its pure numpy/Python
path. Numba is also skipped silently when it cannot be imported.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

ENV_FLAG = "LFSR_DEBRUIJN_NO_JIT"

USE_NUMBA = numba is not None and os.environ.get(ENV_FLAG, "").strip() in ("", "0")


def njit(func):
    """Compile ``func`` with numba when enabled, otherwise return it as is.

    The original function stays reachable as ``.py_func`` either way so the
    benchmark can time both paths in one process.
    """
    if not USE_NUMBA:
        func.py_func = func
        return func
    return numba.njit(cache=True, nogil=True)(func)
