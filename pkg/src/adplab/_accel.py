"""Backend selection for the hot sign-enumeration kernels.

Numba is used when importable unless ``ADPLAB_DISABLE_NUMBA`` is set to a
truthy value, in which case the pure-numpy kernels are used instead.
"""
import os
import warnings

DISABLE_ENV = "ADPLAB_DISABLE_NUMBA"

# An outdated system TBB makes numba warn on the first parallel launch before
# it falls back to another threading layer; the fallback is harmless.
warnings.filterwarnings("ignore", message=".*TBB threading layer.*")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None


def numba_requested() -> bool:
    flag = os.environ.get(DISABLE_ENV, "").strip().lower()
    return flag not in ("1", "true", "yes", "on")


USE_NUMBA = HAS_NUMBA and numba_requested()


def set_threads(count: int) -> None:
    """Cap the number of threads numba kernels may use."""
    if not HAS_NUMBA or count is None:
        return
    count = max(1, min(int(count), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(count)
