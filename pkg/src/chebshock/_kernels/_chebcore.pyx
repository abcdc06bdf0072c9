# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels: Clenshaw recurrences for Chebyshev sums and
the normalized-Hermite mollifier profile.  Mirrors reference.py exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


def cheb_eval(coeffs, x):
    """Evaluate sum_k c_k T_k(x) by the backward (Clenshaw) recurrence."""
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] xv = xa.ravel()
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t n = c.shape[0], m = xv.shape[0], i, k
    cdef double b1, b2, tmp, t2
    for i in range(m):
        b1 = 0.0
        b2 = 0.0
        t2 = 2.0 * xv[i]
        for k in range(n - 1, 0, -1):
            tmp = c[k] + t2 * b1 - b2
            b2 = b1
            b1 = tmp
        ov[i] = c[0] + xv[i] * b1 - b2
    return out.reshape(xa.shape)


def cheb_der_eval_many(coeffs, x):
    """Rows of sum_{k>=1} C_{r,k} T'_k(x) via Clenshaw on the U basis."""
    cdef const double[:, ::1] c = np.ascontiguousarray(
        np.atleast_2d(coeffs), dtype=np.float64
    )
    xa = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] xv = xa.ravel()
    cdef Py_ssize_t rows = c.shape[0], n = c.shape[1], m = xv.shape[0], r, i, k
    out = np.empty((rows, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double b1, b2, tmp, t2
    for r in range(rows):
        for i in range(m):
            b1 = 0.0
            b2 = 0.0
            t2 = 2.0 * xv[i]
            for k in range(n - 2, -1, -1):
                tmp = (k + 1.0) * c[r, k + 1] + t2 * b1 - b2
                b2 = b1
                b1 = tmp
            ov[r, i] = b1
    return out.reshape((rows,) + xa.shape)


def cheb_der_eval(coeffs, x):
    """sum_{k>=1} c_k T'_k(x) for a single coefficient vector."""
    c2 = np.ascontiguousarray(coeffs, dtype=np.float64)[None, :]
    return cheb_der_eval_many(c2, x)[0]


def hermite_rho(p, y):
    """Hermite-Gaussian mollifier profile rho_p(y), stable for large p."""
    ya = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[::1] yv = ya.ravel()
    cdef Py_ssize_t m = yv.shape[0], i, j, k, pp = p
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double pi_quarter = np.pi ** 0.25
    cdef double env, h_prev, h_cur, h_next, acc, a, yy
    cdef Py_ssize_t order
    for i in range(m):
        yy = yv[i]
        env = exp(-0.5 * yy * yy)
        h_prev = env / pi_quarter
        acc = h_prev / pi_quarter
        if pp > 0:
            h_cur = sqrt(2.0) * yy * h_prev
            a = 1.0 / pi_quarter
            order = 1
            for j in range(1, pp + 1):
                while order < 2 * j:
                    h_next = (
                        sqrt(2.0 / (order + 1.0)) * yy * h_cur
                        - sqrt(order / (order + 1.0)) * h_prev
                    )
                    h_prev = h_cur
                    h_cur = h_next
                    order += 1
                a *= -sqrt((2.0 * j - 1.0) / (2.0 * j))
                acc += a * h_cur
        ov[i] = env * acc
    return out.reshape(ya.shape)
