"""
Numba switch. Set ``AFFSUMS_NO_JIT=1`` to run every kernel through its pure
numpy/Python fallback instead (useful for debugging and for cross-checking
the compiled path).
"""

import os

JIT_ENABLED = os.environ.get("AFFSUMS_NO_JIT", "").strip().lower() not in ("1", "true", "yes")

try:
    if not JIT_ENABLED:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
