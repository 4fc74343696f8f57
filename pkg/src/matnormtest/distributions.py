"""Matrix variate and multivariate normal laws, samplers, and the null laws
of the Mahalanobis squared distance.

Random numbers
--------------
Every sampler takes a ``seed`` that is either a non-negative integer or a
:class:`numpy.random.SeedSequence`. Generators are ``PCG64`` streams built from
that seed sequence and normal variates come from numpy's ziggurat sampler
(``Generator.standard_normal``). Sub-streams are derived with
:func:`derive_seed`, which appends integer keys to the seed sequence's spawn
key, so ``derive_seed(s, 1, 2)`` and ``derive_seed(s, 2, 1)`` are independent
streams and results are bit-reproducible on a given numpy build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _special
from .errors import DomainError, SampleTooSmall, ShapeMismatch
from .kernels import kron_quadforms
from .linalg import SpdMatrix, as_spd, logdet_spd, quad_form, vec

LOG_2PI = math.log(2.0 * math.pi)


# --------------------------------------------------------------------------
# seeds


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.SeedSequence(seed)


def derive_seed(seed, *keys: int) -> np.random.SeedSequence:
    """Child seed sequence identified by ``keys`` below ``seed``."""
    ss = _seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(int(k) for k in keys))


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(_seed_sequence(seed)))


# --------------------------------------------------------------------------
# parameter and data containers


@dataclass(frozen=True)
class MatrixNormalParams:
    """Mean ``M`` (r x c), row scale ``U`` (r x r) and column scale ``V`` (c x c)."""

    M: np.ndarray
    U: SpdMatrix
    V: SpdMatrix

    def __post_init__(self):
        M = np.array(self.M, dtype=float, ndmin=2)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "U", as_spd(self.U))
        object.__setattr__(self, "V", as_spd(self.V))
        if M.shape != (self.U.dim, self.V.dim):
            raise ShapeMismatch(
                f"mean is {M.shape}, scales are {self.U.dim}x{self.U.dim} and {self.V.dim}x{self.V.dim}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.M.shape

    def to_mvn(self) -> "MvnParams":
        """Equivalent law of ``vec(X)``: mean ``vec(M)``, covariance ``V kron U``."""
        return MvnParams(vec(self.M), np.kron(self.V.matrix, self.U.matrix))


@dataclass(frozen=True)
class MvnParams:
    mu: np.ndarray
    Sigma: SpdMatrix

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float, ndmin=1)
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "Sigma", as_spd(self.Sigma))
        if mu.shape != (self.Sigma.dim,):
            raise ShapeMismatch(f"mean has shape {mu.shape}, covariance dim {self.Sigma.dim}")

    @property
    def dim(self) -> int:
        return self.mu.size


class MatrixDataset:
    """``N`` observed ``rows x cols`` matrices stored as an ``(N, rows, cols)`` array."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.array(data, dtype=float)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or min(data.shape) < 1:
            raise ShapeMismatch(f"expected an (N, rows, cols) array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("dataset has non-finite entries")
        data.setflags(write=False)
        self.data = data

    @classmethod
    def from_vecs(cls, Y, rows: int, cols: int) -> "MatrixDataset":
        """Build from an ``(N, rows*cols)`` array of column-stacked observations."""
        Y = np.asarray(Y, dtype=float)
        if Y.ndim != 2 or Y.shape[1] != rows * cols:
            raise ShapeMismatch(f"vec rows of length {Y.shape[-1]} do not fit {rows}x{cols}")
        return cls(Y.reshape(-1, cols, rows).transpose(0, 2, 1))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def rows(self) -> int:
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[1:]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i):
        return self.data[i]

    def vecs(self) -> np.ndarray:
        """``(N, rows*cols)`` array whose row ``i`` is ``vec(X_i)``."""
        return self.data.transpose(0, 2, 1).reshape(self.n, -1)

    def __eq__(self, other):
        return isinstance(other, MatrixDataset) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"MatrixDataset(N={self.n}, rows={self.rows}, cols={self.cols})"


# --------------------------------------------------------------------------
# densities


def matnorm_logpdf(X, params: MatrixNormalParams) -> float:
    """Log density of the matrix variate normal law at ``X``."""
    X = np.asarray(X, dtype=float)
    r, c = params.shape
    if X.shape != (r, c):
        raise ShapeMismatch(f"observation is {X.shape}, parameters are {r}x{c}")
    resid = (X - params.M)[None]
    trace_term = kron_quadforms(resid, params.U.chol, params.V.chol)[0]
    return (
        -0.5 * r * c * LOG_2PI
        - 0.5 * r * logdet_spd(params.V)
        - 0.5 * c * logdet_spd(params.U)
        - 0.5 * trace_term
    )


def mvn_logpdf(y, params: MvnParams) -> float:
    y = np.asarray(y, dtype=float)
    if y.shape != params.mu.shape:
        raise ShapeMismatch(f"vector has shape {y.shape}, mean has shape {params.mu.shape}")
    p = params.dim
    return -0.5 * p * LOG_2PI - 0.5 * logdet_spd(params.Sigma) - 0.5 * quad_form(params.Sigma, y - params.mu)


# --------------------------------------------------------------------------
# samplers


def sample_matrix_normal(params: MatrixNormalParams, n: int, seed) -> MatrixDataset:
    """Draw ``n`` matrices as ``M + L_U Z L_V'`` with ``Z`` iid standard normal."""
    if n < 1:
        raise ValueError("n must be at least 1")
    r, c = params.shape
    Z = make_rng(seed).standard_normal((n, r, c))
    X = params.M + np.matmul(np.matmul(params.U.chol, Z), params.V.chol.T)
    return MatrixDataset(X)


def sample_mvn(params: MvnParams, n: int, seed) -> np.ndarray:
    """Draw ``n`` vectors as ``mu + L z``; returns an ``(n, p)`` array."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = make_rng(seed).standard_normal((n, params.dim))
    return params.mu + z @ params.Sigma.chol.T


# --------------------------------------------------------------------------
# null laws


def beta_cdf(x, a: float, b: float):
    """Regularized incomplete beta ``I_x(a, b)``; accepts scalars or arrays."""
    if not (a > 0 and b > 0):
        raise DomainError(f"beta parameters must be positive, got a={a}, b={b}")
    if np.ndim(x) == 0:
        return _special.betainc(float(a), float(b), float(x))
    xs = np.asarray(x, dtype=float)
    return np.array([_special.betainc(float(a), float(b), v) for v in xs.ravel()]).reshape(xs.shape)


def chi2_cdf(x, k: float):
    """Chi-square CDF with ``k`` degrees of freedom; accepts scalars or arrays."""
    if not k > 0:
        raise DomainError(f"degrees of freedom must be positive, got {k}")
    if np.ndim(x) == 0:
        return _special.gammainc(0.5 * k, 0.5 * float(x))
    xs = np.asarray(x, dtype=float)
    return np.array([_special.gammainc(0.5 * k, 0.5 * v) for v in xs.ravel()]).reshape(xs.shape)


def null_beta_params(N: int, r: int, c: int) -> tuple[float, float, float]:
    """Beta law of the scaled multivariate MSD with estimated mean and covariance.

    ``N / (N-1)**2 * D`` follows ``Beta(rc/2, (N - rc - 1)/2)``; returns
    ``(a, b, scale)`` with ``scale = N / (N-1)**2``.
    """
    p = r * c
    if N <= p + 1:
        raise SampleTooSmall(f"need N > rc + 1 = {p + 1}, got N = {N}")
    return p / 2.0, (N - p - 1) / 2.0, N / (N - 1) ** 2
