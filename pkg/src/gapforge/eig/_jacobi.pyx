# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cyclic Jacobi eigensolver for dense symmetric matrices (compiled kernel)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef double _offdiag_norm2(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j] * a[i, j]
    return 2.0 * s


cdef void _rotate(double[:, ::1] a, double[:, ::1] v, Py_ssize_t n,
                  Py_ssize_t p, Py_ssize_t q) nogil:
    cdef double apq = a[p, q]
    cdef double theta, t, c, s, x, y
    cdef Py_ssize_t k
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if theta >= 0:
        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
    c = 1.0 / sqrt(t * t + 1.0)
    s = t * c
    for k in range(n):
        x = a[k, p]
        y = a[k, q]
        a[k, p] = c * x - s * y
        a[k, q] = s * x + c * y
    for k in range(n):
        x = a[p, k]
        y = a[q, k]
        a[p, k] = c * x - s * y
        a[q, k] = s * x + c * y
    a[p, q] = 0.0
    a[q, p] = 0.0
    for k in range(n):
        x = v[k, p]
        y = v[k, q]
        v[k, p] = c * x - s * y
        v[k, q] = s * x + c * y


def jacobi(cnp.ndarray m, double rtol=2.220446049250313e-16, int max_sweeps=100):
    """Return ``(diag, V, sweeps)`` with ``m ~= V diag(d) V^T``.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``rtol * n * ||m||_F``.
    """
    cdef double[:, ::1] a = np.array(m, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef double[:, ::1] v = np.eye(n, dtype=np.float64)
    cdef Py_ssize_t p, q
    cdef int sweep = 0
    cdef double fro2 = 0.0, target
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            fro2 += a[i, j] * a[i, j]
    target = (rtol * n) * (rtol * n) * fro2
    with nogil:
        while sweep < max_sweeps and _offdiag_norm2(a, n) > target:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if fabs(a[p, q]) > 1e-300:
                        _rotate(a, v, n, p, q)
            sweep += 1
    d = np.array([a[i, i] for i in range(n)])
    return d, np.asarray(v), sweep
