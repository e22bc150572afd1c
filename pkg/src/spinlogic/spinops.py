"""Dense complex operators for systems of up to three spin-1/2 nuclei.

Operators are plain ``numpy`` complex arrays. Every comparison takes an
explicit absolute tolerance.
"""
from functools import reduce

import numpy as np

from . import _backend
from .config import TOL
from .errors import DimensionError, NotHermitianError, NotUnitaryError

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY2 = np.eye(2, dtype=complex)
AXES = ("x", "y", "z")


def _square(m, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def kron(a, b):
    """Tensor product with ``a``'s indices major."""
    a = _square(a, "a")
    b = _square(b, "b")
    return np.kron(a, b)


def spin_operator(axis, index, nspins):
    """Spin-1/2 angular momentum ``sigma_axis / 2`` acting on one spin.

    ``index`` is the 0-based position of the spin in the tensor ordering.
    """
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    if not 0 <= index < nspins:
        raise IndexError(f"spin index {index} out of range for {nspins} spins")
    factors = [IDENTITY2] * nspins
    factors[index] = PAULI[axis] / 2
    return reduce(np.kron, factors)


def is_hermitian(h, atol=TOL.construction):
    h = np.asarray(h)
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= atol)


def is_unitary(u, atol=TOL.equivalence):
    u = np.asarray(u)
    return bool(unitarity_error(u) <= atol)


def unitarity_error(u):
    """Largest entry of ``|U^dagger U - I|``."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def eigh(h, atol=TOL.construction):
    h = _square(h, "h")
    if not is_hermitian(h, atol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return _backend.jacobi_eigh(h)


def expm_hermitian(h, scale, atol=TOL.construction):
    """``exp(scale * h)`` for Hermitian ``h`` via Jacobi eigendecomposition.

    With purely imaginary ``scale`` the result is unitary.
    """
    w, v = eigh(h, atol)
    return (v * np.exp(scale * w)) @ v.conj().T


def allclose(a, b, atol):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b), initial=0.0) <= atol)


def phase_fidelity(u, v, atol=TOL.equivalence):
    """``|tr(u^dagger v)| / dim``; equals 1 iff ``u`` and ``v`` differ by a global phase."""
    u = _square(u, "u")
    v = _square(v, "v")
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    for name, m in (("u", u), ("v", v)):
        if not is_unitary(m, atol):
            raise NotUnitaryError(f"{name} is not unitary within {atol:g}")
    return float(min(1.0, abs(np.trace(u.conj().T @ v)) / u.shape[0]))


CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
