"""Empirical CDFs, Kolmogorov-Smirnov statistics and the matrix normality test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distances import matnorm_distances_at, mvn_distances_at
from .distributions import MatrixDataset
from .errors import DomainError, SampleTooSmall
from .estimation import DEFAULT_TOL, FlipFlopReport, MvnEstimate, estimate_mvn, flip_flop_mle


class Ecdf:
    """Right-continuous empirical distribution function of a sample."""

    __slots__ = ("sorted_sample",)

    def __init__(self, sample):
        s = np.sort(np.asarray(sample, dtype=float).ravel())
        if s.size < 1:
            raise ValueError("empirical CDF needs at least one value")
        s.setflags(write=False)
        self.sorted_sample = s

    @property
    def n(self) -> int:
        return self.sorted_sample.size

    def __call__(self, x):
        return ecdf_eval(self, x)


def ecdf_eval(e: Ecdf, x):
    """Fraction of sample values ``<= x``."""
    counts = np.searchsorted(e.sorted_sample, x, side="right")
    if np.ndim(counts) == 0:
        return int(counts) / e.n
    return counts / e.n


def ks_one_sample(sample, cdf) -> float:
    """``sup_x |F_N(x) - F(x)|`` for a continuous reference CDF ``cdf``."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n < 1:
        raise ValueError("sample must be non-empty")
    F = np.array([cdf(v) for v in x], dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_two_sample(a, b) -> float:
    """``sup_x |F_a(x) - F_b(x)|`` by a merge scan of the two sorted samples."""
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size < 1 or b.size < 1:
        raise ValueError("both samples must be non-empty")
    return kernels.ks_2samp_sorted(a, b)


def ks_threshold(alpha: float, n_a: int, n_b: int | None = None) -> float:
    """Rejection threshold ``sqrt(-log(alpha)/2 * (n_a + n_b)/(n_a n_b))``.

    With ``n_b=None`` the one-sample form ``sqrt(-log(alpha) / (2 n_a))`` is
    returned (the ``n_b -> infinity`` limit).
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if n_a < 1 or (n_b is not None and n_b < 1):
        raise ValueError("sample sizes must be positive")
    factor = 1.0 / n_a if n_b is None else (n_a + n_b) / (n_a * n_b)
    return math.sqrt(-0.5 * math.log(alpha) * factor)


@dataclass(frozen=True)
class KsTestResult:
    statistic: float
    threshold: float
    alpha: float
    reject: bool
    n_a: int
    n_b: int


def ks_test_two_sample(a, b, alpha: float) -> KsTestResult:
    stat = ks_two_sample(a, b)
    thr = ks_threshold(alpha, len(a), len(b))
    return KsTestResult(stat, thr, alpha, stat > thr, len(a), len(b))


@dataclass(frozen=True)
class NormalityTestResult:
    """Outcome of :func:`matrix_normality_test` with everything needed for plotting."""

    ks: KsTestResult
    d_mvn: np.ndarray
    d_mat: np.ndarray
    mvn_fit: MvnEstimate
    flip_flop: FlipFlopReport

    @property
    def reject(self) -> bool:
        return self.ks.reject


def matrix_normality_test(
    data: MatrixDataset, alpha: float = 0.05, flip_flop_tol: float = DEFAULT_TOL
) -> NormalityTestResult:
    """Two-sample KS comparison of the multivariate and matrix variate MSDs.

    Both distance samples come from parameters estimated on ``data`` itself.
    Matrix variate normality is rejected when the KS statistic exceeds
    ``ks_threshold(alpha, N, N)``.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    p = data.rows * data.cols
    if data.n < p + 2:
        raise SampleTooSmall(f"need N >= rc + 2 = {p + 2}, got N = {data.n}")
    mvn_fit = estimate_mvn(data)
    ff = flip_flop_mle(data, tol=flip_flop_tol)
    d = mvn_distances_at(data, mvn_fit.params)
    dm = matnorm_distances_at(data, ff.params)
    ks = ks_test_two_sample(d, dm, alpha)
    return NormalityTestResult(ks, d, dm, mvn_fit, ff)
