"""Dispatch to the numba or numpy kernel backend.

``backend`` is the module chosen at import time (see ``_accel``); the
``get_backend`` helper lets tests and benchmarks address either one.
"""
from . import _accel
from . import _kernels_numpy

if _accel.USE_NUMBA:
    from . import _kernels_numba as backend
else:
    backend = _kernels_numpy

BACKEND_NAME = "numba" if _accel.USE_NUMBA else "numpy"


def get_backend(name=None):
    if name is None:
        return backend
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        if not _accel.HAS_NUMBA:
            raise RuntimeError("numba is not installed")
        from . import _kernels_numba
        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")
