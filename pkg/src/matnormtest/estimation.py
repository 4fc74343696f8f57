"""Moment estimates of the vectorized law and the flip-flop maximum likelihood
estimates of the matrix variate normal law."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .distributions import LOG_2PI, MatrixDataset, MatrixNormalParams, MvnParams
from .errors import MaxIterationsExceeded, NotPositiveDefinite, SampleTooSmall, SingularCovariance, SingularUpdate
from .linalg import SpdMatrix, cholesky

DEFAULT_TOL = 1e-8
DEFAULT_PARAM_TOL = 1e-10
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True)
class MvnEstimate:
    """Sample mean and unbiased covariance (divisor ``N - 1``) of ``vec(X_i)``."""

    params: MvnParams


@dataclass(frozen=True)
class FlipFlopReport:
    params: MatrixNormalParams
    iterations: int
    final_loglik: float
    loglik_delta: float
    normalization_kappa: float
    converged: bool = True
    loglik_trace: tuple = field(default=(), repr=False)


def estimate_mvn(data: MatrixDataset) -> MvnEstimate:
    p = data.rows * data.cols
    if data.n < p + 2:
        raise SampleTooSmall(f"need N >= rc + 2 = {p + 2}, got N = {data.n}")
    Y = data.vecs()
    mu = Y.mean(axis=0)
    R = Y - mu
    S = (R.T @ R) / (data.n - 1)
    S = 0.5 * (S + S.T)
    try:
        Sigma = SpdMatrix(S)
    except NotPositiveDefinite as exc:
        raise SingularCovariance(f"sample covariance is singular: {exc}") from None
    return MvnEstimate(MvnParams(mu, Sigma))


def normalize_scale(U, V):
    """Rescale ``(U, V)`` to ``(kappa U, V / kappa)`` with ``trace(kappa U) = r``.

    Returns ``(U', V', kappa)``; ``V' kron U'`` equals ``V kron U``.
    """
    U = U if isinstance(U, SpdMatrix) else SpdMatrix(U)
    V = V if isinstance(V, SpdMatrix) else SpdMatrix(V)
    kappa = U.dim / U.trace()
    if kappa == 1.0:
        return U, V, 1.0
    return U.scaled(kappa), V.scaled(1.0 / kappa), kappa


def _chol_or_raise(S, which):
    try:
        return cholesky(0.5 * (S + S.T))
    except NotPositiveDefinite as exc:
        raise SingularUpdate(f"{which} update is not positive definite: {exc}") from None


def _loglik(R, Lu, Lv):
    N, r, c = R.shape
    logdet_u = 2.0 * np.sum(np.log(np.diag(Lu)))
    logdet_v = 2.0 * np.sum(np.log(np.diag(Lv)))
    trace_sum = float(np.sum(kernels.kron_quadforms(R, Lu, Lv)))
    return -0.5 * (N * r * c * LOG_2PI + N * r * logdet_v + N * c * logdet_u + trace_sum)


def flip_flop_mle(
    data: MatrixDataset,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    V0=None,
    param_tol: float = DEFAULT_PARAM_TOL,
) -> FlipFlopReport:
    """Maximum likelihood estimates of ``(M, U, V)`` by alternating updates.

    ``M`` is the sample mean. Starting from ``V = V0`` (identity by default)
    the row scale is updated as ``U = sum_i R_i V^-1 R_i' / (cN)`` and then
    the column scale as ``V = sum_i R_i' U^-1 R_i / (rN)``, with ``R_i = X_i - M``.
    One iteration is one ``U`` update followed by one ``V`` update. Iteration
    stops once the total log-likelihood increases by less than ``tol`` and the
    trace-normalized scales change by less than ``param_tol`` (relative
    Frobenius norm). The likelihood is flat at its maximum, so the second
    condition is what pins the estimates down to near machine precision.
    The result is normalized so that ``trace(U) = r``.

    Raises
    ------
    SampleTooSmall
        If ``N < 2`` or either scale update cannot have full rank.
    SingularUpdate
        If a scale update is not positive definite.
    MaxIterationsExceeded
        After ``max_iter`` iterations; ``exc.report`` holds the last iterate
        with ``converged=False``.
    """
    N, r, c = data.data.shape
    if N < 2 or N * c < r or N * r < c:
        raise SampleTooSmall(f"flip-flop needs N >= 2, Nc >= r and Nr >= c (N={N}, r={r}, c={c})")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    M = data.data.mean(axis=0)
    R = np.ascontiguousarray(data.data - M)
    if V0 is None:
        Lv = np.eye(c)
    else:
        Lv = _chol_or_raise(np.asarray(V0, dtype=float), "initial V")

    trace = []
    prev = -np.inf
    delta = np.inf
    converged = False
    it = 0
    Un_prev = Vn_prev = None
    for it in range(1, max_iter + 1):
        U = kernels.scatter_rows(R, Lv) / (c * N)
        Lu = _chol_or_raise(U, "row scale")
        V = kernels.scatter_cols(R, Lu) / (r * N)
        Lv = _chol_or_raise(V, "column scale")
        ll = _loglik(R, Lu, Lv)
        trace.append(ll)
        delta = ll - prev
        prev = ll
        s = r / np.trace(U)
        Un, Vn = s * U, V / s
        if Un_prev is not None:
            change = max(
                np.linalg.norm(Un - Un_prev) / np.linalg.norm(Un),
                np.linalg.norm(Vn - Vn_prev) / np.linalg.norm(Vn),
            )
            if delta < tol and change <= param_tol:
                converged = True
                break
        Un_prev, Vn_prev = Un, Vn

    U_spd = SpdMatrix(0.5 * (U + U.T), Lu)
    V_spd = SpdMatrix(0.5 * (V + V.T), Lv)
    U_spd, V_spd, kappa = normalize_scale(U_spd, V_spd)
    report = FlipFlopReport(
        params=MatrixNormalParams(M, U_spd, V_spd),
        iterations=it,
        final_loglik=float(prev),
        loglik_delta=float(max(delta, 0.0)) if np.isfinite(delta) else float("inf"),
        normalization_kappa=float(kappa),
        converged=converged,
        loglik_trace=tuple(trace),
    )
    if not converged:
        raise MaxIterationsExceeded(f"flip-flop did not converge in {max_iter} iterations", report)
    return report
