"""Gate equivalence checks."""
from collections import deque

import numpy as np

from ..config import TOL
from ..errors import DimensionError
from ..spinops import phase_fidelity


def _matrix(u):
    return np.asarray(getattr(u, "matrix", u), dtype=complex)


def _same_dim(u, v):
    u, v = _matrix(u), _matrix(v)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return u, v


def equivalent_global_phase(u, v, tol=TOL.phase):
    u, v = _same_dim(u, v)
    return phase_fidelity(u, v) >= 1.0 - tol


def diagonal_phases(u, v, tol=TOL.phase):
    """Find diagonal unitaries ``D1, D2`` with ``D1 u D2 = v``.

    Returns their phase vectors ``(a, b)`` or ``None``. The magnitude
    patterns must agree first; the phases then satisfy
    ``a_i + b_j = arg v_ij - arg u_ij`` on every nonzero entry, solved by
    walking the bipartite row/column graph.
    """
    u, v = _same_dim(u, v)
    if np.max(np.abs(np.abs(u) - np.abs(v))) > tol:
        return None
    n = u.shape[0]
    nz = np.abs(u) > tol
    a = np.full(n, np.nan)
    b = np.full(n, np.nan)
    for start in range(n):
        if not np.isnan(a[start]):
            continue
        a[start] = 0.0
        queue = deque([("r", start)])
        while queue:
            kind, k = queue.popleft()
            if kind == "r":
                for j in np.nonzero(nz[k])[0]:
                    if np.isnan(b[j]):
                        b[j] = np.angle(v[k, j] / u[k, j]) - a[k]
                        queue.append(("c", j))
            else:
                for i in np.nonzero(nz[:, k])[0]:
                    if np.isnan(a[i]):
                        a[i] = np.angle(v[i, k] / u[i, k]) - b[k]
                        queue.append(("r", i))
    b = np.where(np.isnan(b), 0.0, b)
    d1, d2 = np.exp(1j * a), np.exp(1j * b)
    if np.max(np.abs(d1[:, None] * u * d2[None, :] - v)) > tol:
        return None
    return a, b


def equivalent_up_to_diagonal_phases(u, v, tol=TOL.phase):
    return diagonal_phases(u, v, tol) is not None
