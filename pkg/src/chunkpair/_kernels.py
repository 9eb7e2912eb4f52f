"""JIT shim: numba when available, plain Python otherwise.

Every kernel in this package is written in the numba-supported subset so the
same source runs (slowly) without numba installed.
"""
from __future__ import annotations

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on bare installs
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap
