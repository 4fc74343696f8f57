import json
import struct

import numpy as np
import pytest

from matnormtest.dataio import (
    TestReport,
    atomic_write,
    dataset_to_csv,
    idx_images_bytes,
    idx_labels_bytes,
    read_csv_dataset,
    read_idx_images,
    read_idx_labels,
    read_report,
    write_csv_dataset,
    write_report,
)
from matnormtest.distributions import MatrixDataset
from matnormtest.errors import BadMagic, ParseError, ShapeError, TruncatedFile
from matnormtest.kstest import matrix_normality_test
from matnormtest.simulation import gen_matnorm_dataset


class TestCsvDataset:
    def test_single_row(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,3,2,4\n")
        d = read_csv_dataset(f, 2, 2)
        assert d.n == 1
        assert d[0].tolist() == [[1, 2], [3, 4]]

    def test_header_skipped(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("x11,x21\n1,2\n3,4\n5,6\n")
        d = read_csv_dataset(f, 2, 1)
        assert d.n == 3

    def test_empty(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("")
        with pytest.raises(ParseError):
            read_csv_dataset(f, 2, 2)

    def test_wrong_width(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2,3,4\n1,2,3\n")
        with pytest.raises(ShapeError, match=":2:"):
            read_csv_dataset(f, 2, 2)

    def test_bad_number_location(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2\n3,abc\n")
        with pytest.raises(ParseError, match=r":2:2:"):
            read_csv_dataset(f, 1, 2)

    def test_roundtrip(self, tmp_path):
        data, _ = gen_matnorm_dataset(25, 3, 2, 1)
        f = tmp_path / "d.csv"
        write_csv_dataset(f, data)
        assert read_csv_dataset(f, 3, 2) == data

    def test_twelve_digit_reemission(self, tmp_path):
        data, _ = gen_matnorm_dataset(5, 2, 2, 2)
        f = tmp_path / "d.csv"
        write_csv_dataset(f, data)
        assert dataset_to_csv(read_csv_dataset(f, 2, 2)) == dataset_to_csv(data)


class TestIdx:
    def test_images(self, tmp_path):
        f = tmp_path / "img"
        f.write_bytes(struct.pack(">4I", 0x803, 1, 2, 2) + bytes([0, 1, 2, 3]))
        d = read_idx_images(f)
        assert d.n == 1 and d[0].tolist() == [[0, 1], [2, 3]]

    def test_images_bad_magic(self, tmp_path):
        f = tmp_path / "img"
        f.write_bytes(struct.pack(">4I", 0x801, 1, 2, 2) + bytes(4))
        with pytest.raises(BadMagic):
            read_idx_images(f)

    def test_images_truncated(self, tmp_path):
        f = tmp_path / "img"
        f.write_bytes(struct.pack(">4I", 0x803, 2, 2, 2) + bytes(6))
        with pytest.raises(TruncatedFile):
            read_idx_images(f)

    def test_header_truncated(self, tmp_path):
        f = tmp_path / "img"
        f.write_bytes(struct.pack(">2I", 0x803, 2))
        with pytest.raises(TruncatedFile):
            read_idx_images(f)

    def test_labels(self, tmp_path):
        f = tmp_path / "lab"
        f.write_bytes(struct.pack(">2I", 0x801, 3) + bytes([7, 1, 3]))
        assert read_idx_labels(f).tolist() == [7, 1, 3]

    def test_labels_empty(self, tmp_path):
        f = tmp_path / "lab"
        f.write_bytes(struct.pack(">2I", 0x801, 0))
        assert read_idx_labels(f).tolist() == []

    def test_labels_errors(self, tmp_path):
        f = tmp_path / "lab"
        f.write_bytes(struct.pack(">2I", 0x803, 1) + b"\x01")
        with pytest.raises(BadMagic):
            read_idx_labels(f)
        f.write_bytes(struct.pack(">2I", 0x801, 4) + b"\x01")
        with pytest.raises(TruncatedFile):
            read_idx_labels(f)

    def test_writer_roundtrip(self, tmp_path, rng):
        imgs = rng.integers(0, 256, (4, 3, 5), dtype=np.uint8)
        (tmp_path / "i").write_bytes(idx_images_bytes(imgs))
        (tmp_path / "l").write_bytes(idx_labels_bytes([1, 2, 3, 4]))
        assert np.array_equal(read_idx_images(tmp_path / "i").data, imgs)
        assert read_idx_labels(tmp_path / "l").tolist() == [1, 2, 3, 4]


class TestReportIO:
    @pytest.fixture
    def report(self):
        data, _ = gen_matnorm_dataset(100, 2, 2, 3)
        return TestReport.from_result(matrix_normality_test(data), "sim", data, 0.125)

    def test_decision_field(self, report):
        payload = json.loads(write_report(report))
        assert payload["decision"] in ("reject", "fail_to_reject")
        assert payload["statistic"] <= 1.0

    def test_roundtrip(self, report):
        assert read_report(write_report(report)) == report

    def test_inconsistent_decision(self):
        with pytest.raises(ValueError):
            TestReport("x", 10, 2, 2, 0.05, 0.5, 0.1, "fail_to_reject")


def test_atomic_write_leaves_nothing_on_failure(tmp_path, monkeypatch):
    import os

    target = tmp_path / "out.bin"

    def fail(*args):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", fail)
    with pytest.raises(OSError):
        atomic_write(target, b"data")
    assert list(tmp_path.iterdir()) == []
