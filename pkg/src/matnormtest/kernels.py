"""Backend selection for the numerical inner loops.

The Cython extension ``matnormtest._kernels`` is used when it was built;
otherwise the numpy fallback ``matnormtest._kernels_py`` is used. Setting the
environment variable ``MATNORMTEST_PURE_PYTHON=1`` forces the fallback.
``BACKEND`` names the active choice.
"""

import os

import numpy as np

from . import _kernels_py

if os.environ.get("MATNORMTEST_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

__all__ = [
    "BACKEND",
    "scatter_rows",
    "scatter_cols",
    "kron_quadforms",
    "chol_quadforms",
    "ks_2samp_sorted",
]


def _c(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def scatter_rows(R, L):
    return _impl.scatter_rows(_c(R), _c(L))


def scatter_cols(R, L):
    return _impl.scatter_cols(_c(R), _c(L))


def kron_quadforms(R, Lr, Lc):
    return _impl.kron_quadforms(_c(R), _c(Lr), _c(Lc))


def chol_quadforms(Y, L):
    return _impl.chol_quadforms(_c(Y), _c(L))


def ks_2samp_sorted(a, b):
    return float(_impl.ks_2samp_sorted(_c(a), _c(b)))
