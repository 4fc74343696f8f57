"""Mahalanobis squared distances (MSD) of vectorized and matrix observations.

``D`` is the multivariate MSD of ``vec(X_i)`` under a mean vector and a full
covariance; ``D_M`` is its matrix variate counterpart
``tr(U^-1 (X - M) V^-1 (X - M)')``. Both are evaluated with triangular solves
against Cholesky factors. The two coincide whenever the covariance is
``V kron U``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import MatrixDataset, MatrixNormalParams, MvnParams
from .errors import ShapeMismatch
from .estimation import DEFAULT_TOL, estimate_mvn, flip_flop_mle
from .linalg import quad_form


@dataclass(frozen=True)
class DistancePair:
    d_mvn: float
    d_mat: float


def msd(y, params: MvnParams) -> float:
    y = np.asarray(y, dtype=float)
    if y.shape != params.mu.shape:
        raise ShapeMismatch(f"vector has shape {y.shape}, mean has shape {params.mu.shape}")
    return quad_form(params.Sigma, y - params.mu)


def msd_matrix(X, params: MatrixNormalParams) -> float:
    X = np.asarray(X, dtype=float)
    if X.shape != params.shape:
        raise ShapeMismatch(f"observation is {X.shape}, parameters are {params.shape}")
    resid = (X - params.M)[None]
    return float(kernels.kron_quadforms(resid, params.U.chol, params.V.chol)[0])


def mvn_distances_at(data: MatrixDataset, params: MvnParams) -> np.ndarray:
    """``D`` for every observation under fixed parameters."""
    if data.rows * data.cols != params.dim:
        raise ShapeMismatch(f"dataset is {data.shape}, parameters have dim {params.dim}")
    return kernels.chol_quadforms(data.vecs() - params.mu, params.Sigma.chol)


def matnorm_distances_at(data: MatrixDataset, params: MatrixNormalParams) -> np.ndarray:
    """``D_M`` for every observation under fixed parameters."""
    if data.shape != params.shape:
        raise ShapeMismatch(f"dataset is {data.shape}, parameters are {params.shape}")
    return kernels.kron_quadforms(data.data - params.M, params.U.chol, params.V.chol)


def mvn_distances(data: MatrixDataset) -> np.ndarray:
    """``D`` at the sample mean and unbiased sample covariance of the same data."""
    return mvn_distances_at(data, estimate_mvn(data).params)


def matnorm_distances(data: MatrixDataset, flip_flop_tol: float = DEFAULT_TOL) -> np.ndarray:
    """``D_M`` at the flip-flop maximum likelihood estimates of the same data."""
    return matnorm_distances_at(data, flip_flop_mle(data, tol=flip_flop_tol).params)


def scale_for_beta(d, N: int):
    """Multiply by ``N / (N-1)**2``, mapping estimated-parameter MSDs onto their Beta law."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return d * N / (N - 1) ** 2
