"""JIT switch for the numeric kernels.

Set ``JNB_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python/numpy. The flag is read once, at import time.
"""

import os

_FALSE = {"", "0", "false", "no", "off"}

DISABLED = os.environ.get("JNB_DISABLE_NUMBA", "0").strip().lower() not in _FALSE

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USING_NUMBA = numba is not None and not DISABLED

NUMBA_OPTS = {"cache": True, "nogil": True}


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if USING_NUMBA:
        opts = dict(NUMBA_OPTS)
        opts.update(kwargs)
        if args and callable(args[0]):
            return numba.njit(**opts)(args[0])
        return numba.njit(*args, **opts)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn
