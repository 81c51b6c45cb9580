import struct

import numpy as np
import pytest

from otalign import InputFormatError
from otalign.io import MAGIC, format_float, read_matrix, write_matrix


def bitwise_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and a.tobytes() == b.tobytes()


def awkward_matrix():
    rng = np.random.default_rng(91)
    values = rng.standard_normal((7, 3)) * np.exp(rng.uniform(-250, 250, (7, 3)))
    values[0, 0] = 0.0
    values[1, 1] = -0.0
    values[2, 2] = 5e-324
    values[3, 0] = 1.7976931348623157e308
    values[4, 1] = 1.0 / 3.0
    return values


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", ["csv", "otmx"])
    def test_bitwise_round_trip(self, tmp_path, fmt):
        values = awkward_matrix()
        path = tmp_path / f"m.{fmt}"
        write_matrix(path, values, fmt=fmt)
        assert bitwise_equal(read_matrix(path), values)

    @pytest.mark.parametrize("fmt", ["csv", "otmx"])
    @pytest.mark.parametrize("shape", [(1, 1), (1, 5), (5, 1)])
    def test_degenerate_shapes(self, tmp_path, fmt, shape):
        rng = np.random.default_rng(92)
        values = rng.standard_normal(shape)
        path = tmp_path / f"m.{fmt}"
        write_matrix(path, values, fmt=fmt)
        out = read_matrix(path)
        assert out.shape == shape
        assert bitwise_equal(out, values)

    def test_repeated_writes_identical_bytes(self, tmp_path):
        values = awkward_matrix()
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_matrix(a, values, fmt="csv")
        write_matrix(b, values, fmt="csv")
        assert a.read_bytes() == b.read_bytes()

    def test_format_float_round_trips(self):
        for value in (0.1, 1.0 / 3.0, 5e-324, -0.0, 1.7976931348623157e308):
            assert float(format_float(value)) == value


class TestFormatDetection:
    def test_magic_sniffing(self, tmp_path):
        values = np.array([[1.5, 2.5]])
        path = tmp_path / "data.bin"
        write_matrix(path, values, fmt="otmx")
        assert path.read_bytes()[:4] == MAGIC
        assert bitwise_equal(read_matrix(path), values)

    def test_csv_without_extension(self, tmp_path):
        path = tmp_path / "plain"
        path.write_text("1.0,2.0\n3.0,4.0\n")
        assert read_matrix(path).tolist() == [[1.0, 2.0], [3.0, 4.0]]


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFormatError):
            read_matrix(tmp_path / "absent.csv")

    def test_ragged_csv(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(InputFormatError):
            read_matrix(path)

    def test_non_numeric_csv(self, tmp_path):
        path = tmp_path / "words.csv"
        path.write_text("hello,world\n")
        with pytest.raises(InputFormatError):
            read_matrix(path)

    def test_truncated_otmx(self, tmp_path):
        path = tmp_path / "short.otmx"
        path.write_bytes(MAGIC + struct.pack("<II", 4, 4) + b"\x00" * 16)
        with pytest.raises(InputFormatError):
            read_matrix(path)

    def test_nan_rejected(self, tmp_path):
        path = tmp_path / "nan.csv"
        path.write_text("nan,1.0\n")
        with pytest.raises(InputFormatError):
            read_matrix(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(InputFormatError):
            read_matrix(path)

    def test_unknown_write_format(self, tmp_path):
        with pytest.raises(InputFormatError):
            write_matrix(tmp_path / "x", np.ones((1, 1)), fmt="json")
