"""Select the kernel implementation at import.

The compiled extension is used when it was built; otherwise the pure-Python
module serves the same two functions.
"""
from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_active = _compiled if _compiled is not None else _kernels_py


def available():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def kernels(name=None):
    """Return the kernel module by name, or the active one."""
    if name is None:
        return _active
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels were not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def jacobi_eigh(a):
    return _active.jacobi_eigh(a)


def fid_accumulate(amplitudes, omegas, dwell, n_points, damping):
    return _active.fid_accumulate(amplitudes, omegas, dwell, n_points, damping)
