"""Optional numba acceleration.

Hot numeric kernels are written as plain numpy-compatible functions and
wrapped with ``njit`` when numba is importable and the user has not opted
out.  Setting ``CARTANKIT_DISABLE_NUMBA=1`` (or ``true``/``yes``) in the
environment forces the pure-numpy path; everything behaves identically,
only slower.  ``benchmarks/bench_kernels.py`` measures the gap.
"""

import os

NUMBA_DISABLED = os.environ.get("CARTANKIT_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

if not NUMBA_DISABLED:
    try:
        from numba import njit as _njit
        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False


def maybe_njit(**options):
    """Return ``numba.njit(**options)`` or a no-op decorator."""
    if HAVE_NUMBA:
        return _njit(**options)

    def wrap(func):
        return func

    return wrap
