"""Pure-Python kernels; the reference the compiled module must match."""
import math

import numpy as np

MAX_SWEEPS = 100


def jacobi_eigh(a):
    """Eigen-decompose a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ascending and ``a @ v = v @ diag(w)``.
    Only the Hermitian part of ``a`` is used; callers validate Hermiticity.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    A = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    V = [[1 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    fro2 = sum(abs(x) ** 2 for row in A for x in row)

    for _ in range(MAX_SWEEPS):
        off = sum(abs(A[p][q]) ** 2 for p in range(n) for q in range(p + 1, n))
        if off <= 1e-32 * fro2 or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                ph = apq / r
                theta = (A[q][q].real - A[p][p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                g00, g01, g10, g11 = c, s, -s * phc, c * phc
                for k in range(n):
                    akp, akq = A[k][p], A[k][q]
                    A[k][p] = akp * g00 + akq * g10
                    A[k][q] = akp * g01 + akq * g11
                    vkp, vkq = V[k][p], V[k][q]
                    V[k][p] = vkp * g00 + vkq * g10
                    V[k][q] = vkp * g01 + vkq * g11
                for k in range(n):
                    apk, aqk = A[p][k], A[q][k]
                    A[p][k] = g00 * apk + g10.conjugate() * aqk
                    A[q][k] = g01 * apk + g11.conjugate() * aqk
                A[p][q] = A[q][p] = 0j
                A[p][p] = complex(A[p][p].real)
                A[q][q] = complex(A[q][q].real)

    w = np.array([A[i][i].real for i in range(n)])
    v = np.array(V, dtype=complex)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def fid_accumulate(amplitudes, omegas, dwell, n_points, damping):
    """Sum ``a_k exp(i w_k t) exp(-damping t)`` on ``t = 0, dwell, ...``."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    omegas = np.asarray(omegas, dtype=float)
    t = np.arange(n_points) * dwell
    phases = np.exp(1j * np.outer(t, omegas))
    return (phases @ amplitudes) * np.exp(-damping * t)


