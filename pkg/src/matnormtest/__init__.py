"""Assess matrix variate normality of three-way data.

Each observation is compared under two fits: a multivariate normal fit of
``vec(X_i)`` with an unstructured covariance, and a matrix variate normal fit
whose covariance is ``V kron U``. The per-observation Mahalanobis squared
distances from the two fits feed a DD plot and a two-sample
Kolmogorov-Smirnov test.
"""

from .distances import matnorm_distances, msd, msd_matrix, mvn_distances, scale_for_beta
from .distributions import MatrixDataset, MatrixNormalParams, MvnParams
from .estimation import FlipFlopReport, estimate_mvn, flip_flop_mle, normalize_scale
from .kernels import BACKEND
from .kstest import KsTestResult, ks_threshold, ks_two_sample, matrix_normality_test

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FlipFlopReport",
    "KsTestResult",
    "MatrixDataset",
    "MatrixNormalParams",
    "MvnParams",
    "estimate_mvn",
    "flip_flop_mle",
    "ks_threshold",
    "ks_two_sample",
    "matnorm_distances",
    "matrix_normality_test",
    "msd",
    "msd_matrix",
    "mvn_distances",
    "normalize_scale",
    "scale_for_beta",
]
