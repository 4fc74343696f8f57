"""Dataset readers (CSV of vec rows, IDX images/labels) and report serialization.

CSV datasets hold one observation per line as ``rows*cols`` numbers giving
``vec(X_i)`` in column-major order; a single leading header line is skipped
when its first field is not numeric. The matrix shape is not stored in the
file and must be supplied by the caller.
"""

from __future__ import annotations

import csv
import json
import os
import struct
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .distributions import MatrixDataset
from .errors import BadMagic, ParseError, ShapeError, TruncatedFile

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


def atomic_write(path, blob: bytes) -> None:
    """Write ``blob`` to a temporary sibling of ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_csv_dataset(path, rows: int, cols: int) -> MatrixDataset:
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    p = rows * cols
    vecs = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, fields in enumerate(reader, start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if lineno == 1 and not _is_number(fields[0].strip()):
                continue
            if len(fields) != p:
                raise ShapeError(f"{path}:{lineno}: expected {p} fields for {rows}x{cols}, got {len(fields)}")
            row = []
            for col, f in enumerate(fields, start=1):
                try:
                    row.append(float(f))
                except ValueError:
                    raise ParseError(f"{path}:{lineno}:{col}: not a number: {f!r}") from None
            vecs.append(row)
    if not vecs:
        raise ParseError(f"{path}: no data rows")
    Y = np.array(vecs)
    if not np.all(np.isfinite(Y)):
        bad = np.argwhere(~np.isfinite(Y))[0]
        raise ParseError(f"{path}: non-finite value in data row {bad[0] + 1}, column {bad[1] + 1}")
    return MatrixDataset.from_vecs(Y, rows, cols)


def dataset_to_csv(data: MatrixDataset) -> bytes:
    lines = [",".join(f"{v:.17g}" for v in y) for y in data.vecs()]
    return ("\n".join(lines) + "\n").encode()


def write_csv_dataset(path, data: MatrixDataset) -> None:
    atomic_write(path, dataset_to_csv(data))


def _read_header(blob: bytes, magic: int, ndims: int, path):
    need = 4 * (1 + ndims)
    if len(blob) < 4:
        raise TruncatedFile(f"{path}: file too short for an IDX header")
    (got,) = struct.unpack(">I", blob[:4])
    if got != magic:
        raise BadMagic(f"{path}: magic 0x{got:08x}, expected 0x{magic:08x}")
    if len(blob) < need:
        raise TruncatedFile(f"{path}: file too short for an IDX header")
    return struct.unpack(f">{ndims}I", blob[4:need]), need


def read_idx_images(path) -> MatrixDataset:
    """Read an IDX3 ``ubyte`` image file; pixels stay raw in ``[0, 255]``."""
    blob = Path(path).read_bytes()
    (count, rows, cols), off = _read_header(blob, IDX_IMAGES_MAGIC, 3, path)
    size = count * rows * cols
    if len(blob) - off < size:
        raise TruncatedFile(f"{path}: header declares {size} pixel bytes, found {len(blob) - off}")
    if count < 1:
        raise ParseError(f"{path}: image file holds no images")
    pixels = np.frombuffer(blob, dtype=np.uint8, count=size, offset=off)
    return MatrixDataset(pixels.reshape(count, rows, cols).astype(float))


def read_idx_labels(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    (count,), off = _read_header(blob, IDX_LABELS_MAGIC, 1, path)
    if len(blob) - off < count:
        raise TruncatedFile(f"{path}: header declares {count} labels, found {len(blob) - off}")
    return np.frombuffer(blob, dtype=np.uint8, count=count, offset=off).astype(np.int64)


def idx_images_bytes(images) -> bytes:
    images = np.asarray(images, dtype=np.uint8)
    n, r, c = images.shape
    return struct.pack(">4I", IDX_IMAGES_MAGIC, n, r, c) + images.tobytes()


def idx_labels_bytes(labels) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    return struct.pack(">2I", IDX_LABELS_MAGIC, labels.size) + labels.tobytes()


@dataclass
class TestReport:
    __test__ = False  # keep pytest from collecting this class

    source: str
    n: int
    rows: int
    cols: int
    alpha: float
    statistic: float
    threshold: float
    decision: str
    flip_flop: dict = field(default_factory=dict)
    timing_seconds: float = 0.0

    def __post_init__(self):
        if self.decision not in ("reject", "fail_to_reject"):
            raise ValueError(f"bad decision {self.decision!r}")
        if (self.decision == "reject") != (self.statistic > self.threshold):
            raise ValueError("decision is inconsistent with statistic and threshold")

    @classmethod
    def from_result(cls, result, source: str, data: MatrixDataset, timing: float = 0.0) -> "TestReport":
        ff = result.flip_flop
        return cls(
            source=source,
            n=data.n,
            rows=data.rows,
            cols=data.cols,
            alpha=result.ks.alpha,
            statistic=result.ks.statistic,
            threshold=result.ks.threshold,
            decision="reject" if result.ks.reject else "fail_to_reject",
            flip_flop={
                "iterations": ff.iterations,
                "final_loglik": ff.final_loglik,
                "loglik_delta": ff.loglik_delta,
                "normalization_kappa": ff.normalization_kappa,
                "converged": ff.converged,
            },
            timing_seconds=timing,
        )


def write_report(report: TestReport) -> bytes:
    """JSON text; floats are written with ``repr`` so they parse back exactly."""
    return (json.dumps(asdict(report), indent=2) + "\n").encode()


def read_report(blob: bytes) -> TestReport:
    return TestReport(**json.loads(blob))
