"""Command-line interface.

Exit codes: 0 when matrix normality is not rejected (or the command has no
decision), 2 when it is rejected, 1 on usage, I/O, parse or numerical errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import __version__
from .dataio import TestReport, atomic_write, read_csv_dataset, read_idx_images, read_idx_labels, write_report
from .ddplot import DdPlotData, render_csv, render_svg
from .distributions import MatrixDataset, make_rng
from .errors import MatNormError
from .estimation import DEFAULT_TOL, flip_flop_mle
from .kstest import matrix_normality_test
from .simulation import SweepConfig, power_sweep, sweep_to_csv, type1_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REJECT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dims(text):
    out = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        try:
            if "x" in item:
                r, c = item.split("x")
                out.append((int(r), int(c)))
            else:
                p = int(item)
                s = int(round(p**0.5))
                if s * s != p:
                    raise ValueError
                out.append((s, s))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad dimension {item!r}; use RxC or a perfect square p") from None
    if not out:
        raise argparse.ArgumentTypeError("no dimensions given")
    return out


def _add_input(p):
    p.add_argument("--input", required=True, help="CSV file, one vec(X_i) per line (column-major)")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="flip-flop log-likelihood tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matnormtest", description="Assess matrix variate normality of three-way data.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", help="flip-flop maximum likelihood estimates")
    _add_input(p)

    p = sub.add_parser("test", help="two-sample KS test of matrix normality")
    _add_input(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--report", help="also write the JSON report here")

    p = sub.add_parser("ddplot", help="write DD plot as SVG and/or CSV")
    _add_input(p)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.add_argument("--width", type=int, default=480)
    p.add_argument("--height", type=int, default=480)

    p = sub.add_parser("simulate", help="Monte-Carlo rejection-rate sweep")
    p.add_argument("kind", choices=["type1", "power"])
    p.add_argument("--dims", type=_dims, required=True, help="e.g. 2x2,3x3 or 4,16")
    p.add_argument("--n-start", type=int, required=True)
    p.add_argument("--n-end", type=int, required=True)
    p.add_argument("--n-step", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("mnist-demo", help="DD plot and test for MNIST digit classes")
    p.add_argument("--images", required=True, help="IDX3 image file")
    p.add_argument("--labels", required=True, help="IDX1 label file")
    p.add_argument("--digits", type=_int_list, required=True, help="e.g. 2 or 3,7,1 (pooled into one fit)")
    p.add_argument("--svg", required=True)
    p.add_argument("--csv")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--jitter", type=float, default=0.0, help="add iid N(0, EPS^2) noise to every pixel")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-per-digit", type=int, default=None)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _cmd_estimate(args):
    data = read_csv_dataset(args.input, args.rows, args.cols)
    rep = flip_flop_mle(data, tol=args.tol)
    params = rep.params
    _emit(
        {
            "source": args.input,
            "n": data.n,
            "rows": data.rows,
            "cols": data.cols,
            "M": params.M.tolist(),
            "U": params.U.matrix.tolist(),
            "V": params.V.matrix.tolist(),
            "iterations": rep.iterations,
            "final_loglik": rep.final_loglik,
            "loglik_delta": rep.loglik_delta,
            "normalization_kappa": rep.normalization_kappa,
            "converged": rep.converged,
        }
    )
    return EXIT_OK


def _run_test(data, source, alpha, tol):
    t0 = time.perf_counter()
    result = matrix_normality_test(data, alpha, tol)
    report = TestReport.from_result(result, source, data, time.perf_counter() - t0)
    return result, report


def _cmd_test(args):
    data = read_csv_dataset(args.input, args.rows, args.cols)
    result, report = _run_test(data, args.input, args.alpha, args.tol)
    blob = write_report(report)
    if args.report:
        atomic_write(args.report, blob)
    sys.stdout.write(blob.decode())
    return EXIT_REJECT if result.reject else EXIT_OK


def _cmd_ddplot(args):
    if not (args.svg or args.csv):
        raise UsageError("ddplot needs --svg and/or --csv")
    data = read_csv_dataset(args.input, args.rows, args.cols)
    result, _ = _run_test(data, args.input, 0.05, args.tol)
    dd = DdPlotData(result.d_mvn, result.d_mat, data.rows, data.cols, label=args.input)
    outputs = []
    if args.svg:
        outputs.append((args.svg, render_svg(dd, args.width, args.height)))
    if args.csv:
        outputs.append((args.csv, render_csv(dd)))
    for path, blob in outputs:
        atomic_write(path, blob)
    return EXIT_OK


def _cmd_simulate(args):
    cfg = SweepConfig(
        dims=args.dims,
        n_start=args.n_start,
        n_end=args.n_end,
        n_step=args.n_step,
        alpha=args.alpha,
        replicates=args.reps,
        master_seed=args.seed,
    )
    sweep = type1_sweep if args.kind == "type1" else power_sweep
    rows = sweep(cfg, workers=args.workers)
    atomic_write(args.out, sweep_to_csv(rows))
    failed = sum(r.failures for r in rows)
    if failed:
        print(f"matnormtest: warning: {failed} replicate(s) failed estimation and counted as non-rejections",
              file=sys.stderr)
    return EXIT_OK


def _cmd_mnist(args):
    images = read_idx_images(args.images)
    labels = read_idx_labels(args.labels)
    if labels.size != images.n:
        raise MatNormError(f"{images.n} images but {labels.size} labels")
    picks = []
    for dgt in args.digits:
        idx = np.flatnonzero(labels == dgt)
        if args.max_per_digit is not None:
            idx = idx[: args.max_per_digit]
        if idx.size == 0:
            raise MatNormError(f"no images with label {dgt}")
        picks.append(idx)
    idx = np.concatenate(picks)
    X = images.data[idx]
    if args.jitter > 0:
        X = X + args.jitter * make_rng(args.seed).standard_normal(X.shape)
    data = MatrixDataset(X)
    source = f"{args.images} digits={','.join(map(str, args.digits))} jitter={args.jitter}"
    result, report = _run_test(data, source, args.alpha, args.tol)
    point_labels = labels[idx] if len(args.digits) > 1 else None
    dd = DdPlotData(result.d_mvn, result.d_mat, data.rows, data.cols, label=source, point_labels=point_labels)
    atomic_write(args.svg, render_svg(dd))
    if args.csv:
        atomic_write(args.csv, render_csv(dd))
    sys.stdout.write(write_report(report).decode())
    return EXIT_REJECT if result.reject else EXIT_OK


COMMANDS = {
    "estimate": _cmd_estimate,
    "test": _cmd_test,
    "ddplot": _cmd_ddplot,
    "simulate": _cmd_simulate,
    "mnist-demo": _cmd_mnist,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"matnormtest: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, MatNormError, OSError, ValueError) as exc:
        print(f"matnormtest: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
