# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for flip-flop updates, batched Mahalanobis forms and
the two-sample KS merge scan.

All triangular factors are lower-triangular Cholesky factors; inverses are
applied by forward substitution only. Inputs must be C-contiguous float64
(the wrappers in :mod:`matnormtest.kernels` guarantee this).
"""

import numpy as np
from libc.math cimport fabs


cdef inline void _fwd(const double* L, const double* inv_diag, double* x, Py_ssize_t n,
                      Py_ssize_t stride) noexcept nogil:
    # in-place solve L z = x; L row-major n x n, x strided in memory
    cdef Py_ssize_t i, k
    cdef double s
    cdef const double* row
    for i in range(n):
        row = L + i * n
        s = x[i * stride]
        for k in range(i):
            s -= row[k] * x[k * stride]
        x[i * stride] = s * inv_diag[i]


cdef double[::1] _inv_diag(const double[:, ::1] L):
    cdef Py_ssize_t i, n = L.shape[0]
    cdef double[::1] d = np.empty(n)
    for i in range(n):
        d[i] = 1.0 / L[i, i]
    return d


def scatter_rows(const double[:, :, ::1] R, const double[:, ::1] L):
    """sum_i (R_i L^-T)(R_i L^-T)^T for R of shape (N, a, b), L of shape (b, b)."""
    cdef Py_ssize_t N = R.shape[0], a = R.shape[1], b = R.shape[2]
    cdef Py_ssize_t n, i, j, k
    cdef double[:, ::1] Y = np.empty((a, b))
    out_arr = np.zeros((a, a))
    cdef double[:, ::1] out = out_arr
    cdef double s
    cdef double[::1] dL = _inv_diag(L)
    cdef const double* pL = &L[0, 0]
    with nogil:
        for n in range(N):
            for i in range(a):
                for j in range(b):
                    Y[i, j] = R[n, i, j]
                _fwd(pL, &dL[0], &Y[i, 0], b, 1)
            for i in range(a):
                for k in range(i + 1):
                    s = 0.0
                    for j in range(b):
                        s += Y[i, j] * Y[k, j]
                    out[i, k] += s
        for i in range(a):
            for k in range(i):
                out[k, i] = out[i, k]
    return out_arr


def scatter_cols(const double[:, :, ::1] R, const double[:, ::1] L):
    """sum_i (L^-1 R_i)^T (L^-1 R_i) for R of shape (N, a, b), L of shape (a, a)."""
    cdef Py_ssize_t N = R.shape[0], a = R.shape[1], b = R.shape[2]
    cdef Py_ssize_t n, i, j, k
    cdef double[:, ::1] Z = np.empty((a, b))
    out_arr = np.zeros((b, b))
    cdef double[:, ::1] out = out_arr
    cdef double s
    cdef double[::1] dL = _inv_diag(L)
    cdef const double* pL = &L[0, 0]
    with nogil:
        for n in range(N):
            for i in range(a):
                for j in range(b):
                    Z[i, j] = R[n, i, j]
            for j in range(b):
                _fwd(pL, &dL[0], &Z[0, j], a, b)
            for j in range(b):
                for k in range(j + 1):
                    s = 0.0
                    for i in range(a):
                        s += Z[i, j] * Z[i, k]
                    out[j, k] += s
        for j in range(b):
            for k in range(j):
                out[k, j] = out[j, k]
    return out_arr


def kron_quadforms(const double[:, :, ::1] R, const double[:, ::1] Lr, const double[:, ::1] Lc):
    """Per-observation ||Lr^-1 R_i Lc^-T||_F^2, i.e. tr(U^-1 R_i V^-1 R_i^T)."""
    cdef Py_ssize_t N = R.shape[0], a = R.shape[1], b = R.shape[2]
    cdef Py_ssize_t n, i, j
    cdef double[:, ::1] Z = np.empty((a, b))
    out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double s
    cdef double[::1] dr = _inv_diag(Lr)
    cdef double[::1] dc = _inv_diag(Lc)
    cdef const double* pr = &Lr[0, 0]
    cdef const double* pc = &Lc[0, 0]
    with nogil:
        for n in range(N):
            for i in range(a):
                for j in range(b):
                    Z[i, j] = R[n, i, j]
            for j in range(b):
                _fwd(pr, &dr[0], &Z[0, j], a, b)
            s = 0.0
            for i in range(a):
                _fwd(pc, &dc[0], &Z[i, 0], b, 1)
                for j in range(b):
                    s += Z[i, j] * Z[i, j]
            out[n] = s
    return out_arr


def chol_quadforms(const double[:, ::1] Y, const double[:, ::1] L):
    """Per-row ||L^-1 y_i||^2 for Y of shape (N, p)."""
    cdef Py_ssize_t N = Y.shape[0], p = Y.shape[1]
    cdef Py_ssize_t n, j
    cdef double[::1] z = np.empty(p)
    out_arr = np.empty(N)
    cdef double[::1] out = out_arr
    cdef double s
    cdef double[::1] dL = _inv_diag(L)
    cdef const double* pL = &L[0, 0]
    with nogil:
        for n in range(N):
            for j in range(p):
                z[j] = Y[n, j]
            _fwd(pL, &dL[0], &z[0], p, 1)
            s = 0.0
            for j in range(p):
                s += z[j] * z[j]
            out[n] = s
    return out_arr


def ks_2samp_sorted(const double[::1] a, const double[::1] b):
    """sup |F_a - F_b| for sorted samples; ties are consumed as a block."""
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t i = 0, j = 0
    cdef double v, d, best = 0.0
    with nogil:
        while i < na or j < nb:
            if j >= nb or (i < na and a[i] <= b[j]):
                v = a[i]
            else:
                v = b[j]
            while i < na and a[i] <= v:
                i += 1
            while j < nb and b[j] <= v:
                j += 1
            d = fabs(<double>i / na - <double>j / nb)
            if d > best:
                best = d
    return best
