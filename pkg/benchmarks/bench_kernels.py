"""Compare the compiled and pure-Python kernel backends.

Run ``python benchmarks/bench_kernels.py`` (add ``--quick`` for a short run).
Each row reports the best-of-``repeat`` time per call for both backends and
the speed-up; the last row times a whole ``matrix_normality_test``.
"""

import argparse
import timeit

import numpy as np

from matnormtest import _kernels_py, kernels
from matnormtest.kstest import matrix_normality_test
from matnormtest.simulation import gen_matnorm_dataset

try:
    from matnormtest import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _spd_chol(rng, d):
    A = rng.standard_normal((d, d))
    return np.linalg.cholesky(A @ A.T + d * np.eye(d))


def cases(rng, N, r, c):
    R = rng.standard_normal((N, r, c))
    Y = R.reshape(N, r * c, order="F").copy()
    Lr, Lc, Lp = _spd_chol(rng, r), _spd_chol(rng, c), _spd_chol(rng, r * c)
    a, b = np.sort(rng.standard_normal(N)), np.sort(rng.standard_normal(N))
    return {
        "scatter_rows": lambda m: m.scatter_rows(R, Lc),
        "scatter_cols": lambda m: m.scatter_cols(R, Lr),
        "kron_quadforms": lambda m: m.kron_quadforms(R, Lr, Lc),
        "chol_quadforms": lambda m: m.chol_quadforms(Y, Lp),
        "ks_2samp_sorted": lambda m: m.ks_2samp_sorted(a, b),
    }


def best(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def full_test(impl, data, number, repeat):
    saved = kernels._impl
    kernels._impl = impl
    try:
        return best(lambda: matrix_normality_test(data), number, repeat)
    finally:
        kernels._impl = saved


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--cols", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    number = 3 if args.quick else 20
    repeat = 2 if args.quick else args.repeat

    rng = np.random.default_rng(0)
    impls = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c is not None else [])
    print(f"N={args.n} r={args.rows} c={args.cols}; active backend: {kernels.BACKEND}")
    print(f"{'kernel':<22}" + "".join(f"{name + ' (us)':>16}" for name, _ in impls) + f"{'speed-up':>10}")
    for name, fn in cases(rng, args.n, args.rows, args.cols).items():
        ref = fn(_kernels_py)
        times = []
        for _, impl in impls:
            np.testing.assert_allclose(fn(impl), ref, rtol=1e-10, atol=1e-12)
            times.append(best(lambda: fn(impl), number, repeat))
        ratio = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'n/a':>10}"
        print(f"{name:<22}" + "".join(f"{t * 1e6:>16.1f}" for t in times) + ratio)

    data, _ = gen_matnorm_dataset(args.n, args.rows, args.cols, 0)
    times = [full_test(impl, data, max(1, number // 10), repeat) for _, impl in impls]
    ratio = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'n/a':>10}"
    print(f"{'matrix_normality_test':<22}" + "".join(f"{t * 1e6:>16.1f}" for t in times) + ratio)


if __name__ == "__main__":
    main()
