"""Random parameters, simulated datasets and Monte-Carlo rejection-rate sweeps.

Seed layout
-----------
``random_spd`` draws from ``seed`` directly. ``gen_matnorm_dataset`` uses
``derive_seed(seed, k)`` with ``k = 0`` for the mean, ``1`` for ``U``, ``2``
for ``V`` and ``3`` for the observations. ``gen_nonkron_dataset`` uses ``0``
for the mean, ``1`` for the covariance and ``2`` for the observations. In a
sweep, replicate ``k`` of sample size ``N`` for the ``d``-th shape uses
``derive_seed(master_seed, d, N, k)``.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import (
    MatrixDataset,
    MatrixNormalParams,
    MvnParams,
    derive_seed,
    make_rng,
    sample_matrix_normal,
    sample_mvn,
)
from .errors import MatNormError
from .estimation import DEFAULT_TOL
from .kstest import matrix_normality_test
from .linalg import SpdMatrix

log = logging.getLogger(__name__)

RIDGE = 0.1
SWEEP_CSV_HEADER = ("r", "c", "N", "replicates", "rejections", "rejection_rate")


def random_spd(dim: int, seed) -> SpdMatrix:
    """``A A' + 0.1 * dim * I`` with ``A`` a ``dim x dim`` standard normal matrix."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    A = make_rng(seed).standard_normal((dim, dim))
    S = A @ A.T + RIDGE * dim * np.eye(dim)
    return SpdMatrix(0.5 * (S + S.T))


def random_matnorm_params(r: int, c: int, seed) -> MatrixNormalParams:
    M = make_rng(derive_seed(seed, 0)).standard_normal((r, c))
    return MatrixNormalParams(M, random_spd(r, derive_seed(seed, 1)), random_spd(c, derive_seed(seed, 2)))


def gen_matnorm_dataset(N: int, r: int, c: int, seed) -> tuple[MatrixDataset, MatrixNormalParams]:
    """Matrix variate normal sample with random ground-truth parameters."""
    params = random_matnorm_params(r, c, seed)
    return sample_matrix_normal(params, N, derive_seed(seed, 3)), params


def square_shape(p: int) -> tuple[int, int]:
    s = math.isqrt(p)
    if s * s != p:
        raise ValueError(f"p={p} is not a perfect square; give rows and cols explicitly")
    return s, s


def gen_nonkron_dataset(N: int, p: int, seed, rows: int | None = None, cols: int | None = None) -> MatrixDataset:
    """Multivariate normal sample with an unstructured covariance, reshaped to matrices.

    Each length-``p`` draw is turned into a ``rows x cols`` matrix by inverting
    the column-stacking ``vec``; the default shape is square.
    """
    if rows is None and cols is None:
        rows, cols = square_shape(p)
    elif rows is None or cols is None or rows * cols != p:
        raise ValueError(f"shape {rows}x{cols} does not factor p={p}")
    mu = make_rng(derive_seed(seed, 0)).standard_normal(p)
    Sigma = random_spd(p, derive_seed(seed, 1))
    Y = sample_mvn(MvnParams(mu, Sigma), N, derive_seed(seed, 2))
    return MatrixDataset.from_vecs(Y, rows, cols)


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple
    n_start: int
    n_end: int
    n_step: int = 5
    alpha: float = 0.05
    replicates: int = 500
    master_seed: int = 0
    flip_flop_tol: float = DEFAULT_TOL

    def __post_init__(self):
        dims = tuple((int(r), int(c)) for r, c in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(r < 1 or c < 1 for r, c in dims):
            raise ValueError("dims must be a non-empty list of positive (r, c) pairs")
        need = max(r * c for r, c in dims) + 2
        if self.n_start < need:
            raise ValueError(f"n_start must be at least {need} for the largest shape")
        if self.n_end < self.n_start:
            raise ValueError("n_end must not be below n_start")
        if self.n_step < 1 or self.replicates < 1:
            raise ValueError("n_step and replicates must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    def sizes(self) -> list[int]:
        return list(range(self.n_start, self.n_end + 1, self.n_step))


@dataclass(frozen=True)
class SweepRow:
    r: int
    c: int
    N: int
    rejections: int
    replicates: int
    failures: int = 0

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.replicates


def _run_cell(kind, cfg: SweepConfig, d_index, N):
    r, c = cfg.dims[d_index]
    rejections = failures = 0
    for k in range(cfg.replicates):
        seed = derive_seed(cfg.master_seed, d_index, N, k)
        try:
            if kind == "type1":
                data, _ = gen_matnorm_dataset(N, r, c, seed)
            else:
                data = gen_nonkron_dataset(N, r * c, seed, rows=r, cols=c)
            rejections += matrix_normality_test(data, cfg.alpha, cfg.flip_flop_tol).reject
        except MatNormError as exc:
            failures += 1
            log.warning("replicate %d at r=%d c=%d N=%d failed: %s", k, r, c, N, exc)
    return SweepRow(r, c, N, int(rejections), cfg.replicates, failures)


def _sweep(kind, cfg: SweepConfig, workers: int):
    cells = [(d, N) for d in range(len(cfg.dims)) for N in cfg.sizes()]
    if workers <= 1:
        return [_run_cell(kind, cfg, d, N) for d, N in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_cell, kind, cfg, d, N) for d, N in cells]
        return [f.result() for f in futures]


def type1_sweep(cfg: SweepConfig, workers: int = 1) -> list[SweepRow]:
    """Rejection rates of the matrix normality test on matrix variate normal data.

    Failed replicates (estimation errors) count as non-rejections in the
    denominator and are reported in ``SweepRow.failures``.
    """
    return _sweep("type1", cfg, workers)


def power_sweep(cfg: SweepConfig, workers: int = 1) -> list[SweepRow]:
    """Same protocol as :func:`type1_sweep` on data without Kronecker structure."""
    return _sweep("power", cfg, workers)


def sweep_to_csv(rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        w.writerow([row.r, row.c, row.N, row.replicates, row.rejections, repr(row.rejection_rate)])
    return buf.getvalue().encode()
