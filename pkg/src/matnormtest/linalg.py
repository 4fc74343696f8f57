"""Dense linear algebra helpers.

Matrices and vectors are plain ``numpy`` float arrays. The only wrapper type
is :class:`SpdMatrix`, which validates symmetry on construction and caches the
lower Cholesky factor so that quadratic forms and log-determinants never need
an explicit inverse.

``vec`` stacks columns (Fortran order), so that for conformable ``A, C, B``::

    vec(A @ C @ B.T) == kron(B, A) @ vec(C)
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefinite, ShapeMismatch

SYMMETRY_RTOL = 1e-12
PIVOT_RTOL = 1e-12


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ShapeMismatch(f"expected a non-empty 2-d array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix has non-finite entries")
    return X


def vec(X) -> np.ndarray:
    """Column-stack ``X`` into a vector of length ``rows * cols``."""
    X = _as_matrix(X)
    return X.reshape(-1, order="F")


def unvec(y, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    y = np.asarray(y, dtype=float)
    if y.shape != (rows * cols,):
        raise ShapeMismatch(f"cannot reshape length {y.size} to {rows}x{cols}")
    return y.reshape((rows, cols), order="F")


def kron(A, B) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``A[i, j] * B``."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    m, n = A.shape
    p, q = B.shape
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(m * p, n * q)


def _check_symmetric(S: np.ndarray) -> None:
    if S.shape[0] != S.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {S.shape}")
    scale = 1.0 + np.max(np.abs(S))
    if np.max(np.abs(S - S.T)) > SYMMETRY_RTOL * scale:
        raise NotPositiveDefinite("matrix is not symmetric")


def cholesky(S) -> np.ndarray:
    """Lower Cholesky factor ``L`` with ``L @ L.T == S``.

    Raises
    ------
    NotPositiveDefinite
        If ``S`` is not symmetric, or some pivot ``L[i, i]**2`` is at most
        ``1e-12`` times the largest diagonal entry of ``S``.
    """
    S = _as_matrix(S)
    _check_symmetric(S)
    floor = PIVOT_RTOL * max(float(np.max(np.diag(S))), 0.0)
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.diag(L) ** 2
    if not np.all(pivots > floor) or not np.all(np.isfinite(L)):
        raise NotPositiveDefinite(
            f"smallest pivot {pivots.min():.3e} is below floor {floor:.3e}"
        )
    return L


class SpdMatrix:
    """Symmetric positive definite matrix together with its Cholesky factor.

    Both arrays are read-only; construct a new instance instead of mutating.
    """

    __slots__ = ("matrix", "chol")

    def __init__(self, S, chol=None):
        S = _as_matrix(S).copy()
        if chol is None:
            L = cholesky(S)
        else:
            _check_symmetric(S)
            L = np.array(chol, dtype=float)
        S.setflags(write=False)
        L.setflags(write=False)
        self.matrix = S
        self.chol = L

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.matrix, dtype=dtype)

    def __repr__(self) -> str:
        return f"SpdMatrix({self.matrix!r})"

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def scaled(self, factor: float) -> "SpdMatrix":
        """Return ``factor * self``; ``factor`` must be positive."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return SpdMatrix(factor * self.matrix, np.sqrt(factor) * self.chol)


def as_spd(S) -> SpdMatrix:
    return S if isinstance(S, SpdMatrix) else SpdMatrix(S)


def spd_solve(S, b) -> np.ndarray:
    """Solve ``S x = b`` with two triangular solves against the cached factor.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    S = as_spd(S)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != S.dim:
        raise ShapeMismatch(f"rhs has {b.shape[0]} rows, matrix has dim {S.dim}")
    z = solve_triangular(S.chol, b, lower=True, check_finite=False)
    return solve_triangular(S.chol.T, z, lower=False, check_finite=False)


def logdet_spd(S) -> float:
    """``log |S|`` as twice the sum of log Cholesky diagonals."""
    S = as_spd(S)
    return 2.0 * float(np.sum(np.log(np.diag(S.chol))))


def quad_form(S, y) -> float:
    """``y' S^{-1} y`` via one forward substitution."""
    S = as_spd(S)
    y = np.asarray(y, dtype=float)
    if y.shape != (S.dim,):
        raise ShapeMismatch(f"vector of shape {y.shape} vs matrix dim {S.dim}")
    z = solve_triangular(S.chol, y, lower=True, check_finite=False)
    return float(z @ z)
