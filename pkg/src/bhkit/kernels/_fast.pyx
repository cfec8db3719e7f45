# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Same contracts as kernels._ref; powers are sequential products so the
two backends agree to the last few ulps.
"""

import numpy as np


def eval_poly_batch(const long long[:, ::1] expo, const double complex[:, ::1] coeffs,
                    const double complex[:, ::1] points):
    cdef Py_ssize_t K = expo.shape[0]
    cdef Py_ssize_t n = expo.shape[1]
    cdef Py_ssize_t S = points.shape[0]
    cdef Py_ssize_t d = coeffs.shape[1]
    out_arr = np.zeros((S, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t s, a, j, c
    cdef long long e, t
    cdef double complex mono, zp
    with nogil:
        for s in range(S):
            for a in range(K):
                mono = 1.0
                for j in range(n):
                    e = expo[a, j]
                    zp = points[s, j]
                    for t in range(e):
                        mono = mono * zp
                for c in range(d):
                    out[s, c] = out[s, c] + mono * coeffs[a, c]
    return out_arr


def restriction_coeffs(const long long[:, ::1] expo, const double complex[:, ::1] coeffs,
                       const double complex[::1] z, Py_ssize_t axis):
    cdef Py_ssize_t K = expo.shape[0]
    cdef Py_ssize_t n = expo.shape[1]
    cdef Py_ssize_t d = coeffs.shape[1]
    cdef Py_ssize_t a, j, c
    cdef long long e, t, degree = 0
    for a in range(K):
        if expo[a, axis] > degree:
            degree = expo[a, axis]
    out_arr = np.zeros((degree + 1, d), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex mono, zp
    with nogil:
        for a in range(K):
            mono = 1.0
            for j in range(n):
                if j == axis:
                    continue
                e = expo[a, j]
                zp = z[j]
                for t in range(e):
                    mono = mono * zp
            for c in range(d):
                out[expo[a, axis], c] = out[expo[a, axis], c] + mono * coeffs[a, c]
    return out_arr
