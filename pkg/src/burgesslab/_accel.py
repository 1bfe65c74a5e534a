"""Backend selection for the hot kernels.

Set ``BURGESSLAB_BACKEND=numpy`` to force the vectorized numpy path, or
``BURGESSLAB_BACKEND=numba`` (the default when numba imports) for the
jitted loops.  Without numba, ``njit`` degrades to a no-op decorator so the
loop kernels still run as plain Python, which the test suite uses to
cross-check both paths on small inputs.
"""

import os

try:
    import numba

    # the bundled TBB is too old; avoid the probe and its warning
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is normally installed
    numba = None
    HAVE_NUMBA = False

_requested = os.environ.get("BURGESSLAB_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"BURGESSLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

USE_NUMBA = HAVE_NUMBA and _requested != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is present, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda fn: fn


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range


def set_threads(n):
    """Bound numba's worker pool; a no-op on the numpy backend."""
    if not USE_NUMBA or n is None:
        return
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
