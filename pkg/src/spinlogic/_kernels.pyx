# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``."""
import numpy as np

from libc.math cimport sqrt, fabs, cos, sin, exp, hypot

cdef int MAX_SWEEPS = 100


def jacobi_eigh(a_in):
    cdef double complex[:, ::1] A
    cdef double complex[:, ::1] V
    cdef Py_ssize_t n, p, q, k, sweep
    cdef double off, fro2, r, theta, t, c, s
    cdef double complex apq, ph, phc, g00, g01, g10, g11, akp, akq, apk, aqk

    a = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    A = a
    V = v

    fro2 = 0.0
    for p in range(n):
        for q in range(n):
            fro2 += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag

    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
        if off <= 1e-32 * fro2 or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = hypot(apq.real, apq.imag)
                if r < 1e-300:
                    continue
                ph = apq / r
                phc = ph.conjugate()
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                g00 = c
                g01 = s
                g10 = -s * phc
                g11 = c * phc
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = akp * g00 + akq * g10
                    A[k, q] = akp * g01 + akq * g11
                    akp = V[k, p]
                    akq = V[k, q]
                    V[k, p] = akp * g00 + akq * g10
                    V[k, q] = akp * g01 + akq * g11
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = g00 * apk + g10.conjugate() * aqk
                    A[q, k] = g01 * apk + g11.conjugate() * aqk
                A[p, q] = 0
                A[q, p] = 0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real

    w = np.array([A[p, p].real for p in range(n)])
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def fid_accumulate(amplitudes, omegas, double dwell, Py_ssize_t n_points, double damping):
    cdef double complex[::1] amp = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    cdef double[::1] om = np.ascontiguousarray(omegas, dtype=np.float64)
    out = np.empty(n_points, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef Py_ssize_t k, j, m = amp.shape[0]
    cdef double t, re, im, ph, env
    for k in range(n_points):
        t = k * dwell
        re = 0.0
        im = 0.0
        for j in range(m):
            ph = om[j] * t
            re += amp[j].real * cos(ph) - amp[j].imag * sin(ph)
            im += amp[j].real * sin(ph) + amp[j].imag * cos(ph)
        env = exp(-damping * t)
        res[k] = (re * env) + 1j * (im * env)
    return out
