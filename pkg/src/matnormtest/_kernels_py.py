"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``.

Signatures and results match the extension; only speed differs.
"""

import numpy as np
from scipy.linalg import solve_triangular


def _lsolve(L, B):
    return solve_triangular(L, B, lower=True, check_finite=False)


def scatter_rows(R, L):
    """sum_i (R_i L^-T)(R_i L^-T)^T for R of shape (N, a, b), L of shape (b, b)."""
    N, a, b = R.shape
    Y = _lsolve(L, R.reshape(N * a, b).T).reshape(b, N, a)
    out = np.tensordot(Y, Y, axes=([0, 1], [0, 1]))
    return 0.5 * (out + out.T)


def scatter_cols(R, L):
    """sum_i (L^-1 R_i)^T (L^-1 R_i) for R of shape (N, a, b), L of shape (a, a)."""
    N, a, b = R.shape
    Z = _lsolve(L, R.transpose(1, 0, 2).reshape(a, N * b)).reshape(a, N, b)
    out = np.tensordot(Z, Z, axes=([0, 1], [0, 1]))
    return 0.5 * (out + out.T)


def kron_quadforms(R, Lr, Lc):
    """Per-observation ||Lr^-1 R_i Lc^-T||_F^2."""
    N, a, b = R.shape
    Z = _lsolve(Lr, R.transpose(1, 0, 2).reshape(a, N * b)).reshape(a, N, b)
    W = _lsolve(Lc, Z.transpose(2, 0, 1).reshape(b, a * N)).reshape(b, a, N)
    return np.einsum("ijn,ijn->n", W, W)


def chol_quadforms(Y, L):
    """Per-row ||L^-1 y_i||^2 for Y of shape (N, p)."""
    Z = _lsolve(L, Y.T)
    return np.einsum("pn,pn->n", Z, Z)


def ks_2samp_sorted(a, b):
    """sup |F_a - F_b| for sorted samples."""
    pooled = np.concatenate([a, b])
    ia = np.searchsorted(a, pooled, side="right")
    ib = np.searchsorted(b, pooled, side="right")
    return float(np.max(np.abs(ia / a.size - ib / b.size)))
