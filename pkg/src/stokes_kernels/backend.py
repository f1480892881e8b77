"""Numba/NumPy backend selection.

Hot kernels come in two implementations: a scalar-loop version compiled
with numba's @njit, and a vectorized pure-numpy twin. The active backend
is chosen once at import time from the environment:

    STOKES_KERNELS_BACKEND=numpy   force the pure-numpy path
    STOKES_KERNELS_BACKEND=numba   require numba (raise if missing)

unset: use numba when importable, else fall back to numpy.

Thread count only distributes independent output cells; per-cell
reduction order is fixed, so results are identical at any thread count.
"""

from __future__ import annotations

import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

_choice = os.environ.get("STOKES_KERNELS_BACKEND", "").strip().lower()

if _choice in ("numpy", "python"):
    USE_NUMBA = False
elif _choice == "numba":
    import numba  # noqa: F401  (fail loudly if requested but missing)

    USE_NUMBA = True
elif _choice == "":
    try:
        import numba  # noqa: F401

        USE_NUMBA = True
    except ImportError:
        USE_NUMBA = False
else:
    raise ValueError(
        f"STOKES_KERNELS_BACKEND={_choice!r}: expected 'numba' or 'numpy'"
    )

BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    from numba import njit, prange
else:
    def njit(*args, **kwargs):  # type: ignore[misc]
        """Pass-through decorator so njit twins stay importable."""
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

    prange = range  # type: ignore[assignment]


def set_threads(n: int) -> int:
    """Request n worker threads; returns the count actually in effect."""
    if not USE_NUMBA:
        return 1
    import numba

    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return numba.get_num_threads()
