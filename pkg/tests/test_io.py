"""Tests for the binary matrix, vector, quantized, low-rank and FFN formats."""

from __future__ import annotations

import struct

import numpy as np
import pytest

from hire.approx import fit_low_rank_svd, quantize_int4
from hire.common.errors import FormatError
from hire.common.models import ScoreMatrix
from hire.common.rng import gaussian, make_rng
from hire.ffn import CommonPathFFN, GroupedFFN
from hire.io import (
    read_common_path,
    read_ffn,
    read_low_rank,
    read_matrix,
    read_quantized,
    read_vector,
    write_common_path,
    write_ffn,
    write_low_rank,
    write_matrix,
    write_quantized,
    write_vector,
)
from hire.io.binary import pack_int4, unpack_int4


def test_matrix_layout_is_column_major(tmp_path):
    z = ScoreMatrix(np.array([[1, 2], [3, 4]], dtype=np.float32))
    path = tmp_path / "z.bin"
    write_matrix(path, z)
    data = path.read_bytes()
    assert data[:4] == b"HIRM"
    assert struct.unpack("<2I", data[4:12]) == (2, 2)
    assert struct.unpack("<4f", data[12:]) == (1.0, 3.0, 2.0, 4.0)
    assert read_matrix(path).equals(z)


def test_vector_file(tmp_path):
    path = tmp_path / "x.bin"
    write_vector(path, [0.5, -1.0, 2.0])
    assert path.read_bytes()[:8] == b"HIRV" + struct.pack("<I", 3)
    assert read_vector(path).tolist() == [0.5, -1.0, 2.0]


def test_bad_magic(tmp_path):
    path = tmp_path / "z.bin"
    path.write_bytes(b"NOPE" + struct.pack("<2I", 1, 1) + struct.pack("<f", 1.0))
    with pytest.raises(FormatError, match="magic"):
        read_matrix(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "z.bin"
    path.write_bytes(b"HIRM" + struct.pack("<2I", 2, 2) + struct.pack("<3f", 1, 2, 3))
    with pytest.raises(FormatError, match="truncated"):
        read_matrix(path)


def test_trailing_bytes(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"HIRV" + struct.pack("<I", 1) + struct.pack("<2f", 1, 2))
    with pytest.raises(FormatError):
        read_vector(path)


def test_format_error_is_os_error(tmp_path):
    path = tmp_path / "empty.bin"
    path.write_bytes(b"")
    with pytest.raises(OSError):
        read_vector(path)


# --- int4 ---


def test_pack_int4_low_nibble_first():
    codes = np.array([[1, -1, 7]], dtype=np.int8)
    assert pack_int4(codes) == bytes([0xF1, 0x07])


def test_unpack_sign_extends():
    codes = np.array([[-7, 3], [0, 7], [5, -2]], dtype=np.int8)
    assert np.array_equal(unpack_int4(pack_int4(codes), 3, 2), codes)


def test_quantized_file(tmp_path):
    q = quantize_int4(ScoreMatrix(gaussian(make_rng(1), 5, 3)))
    path = tmp_path / "q.bin"
    write_quantized(path, q)
    assert len(path.read_bytes()) == 4 + 8 + 3 * 4 + 8
    back = read_quantized(path)
    assert np.array_equal(back.codes, q.codes)
    assert back.scales.tobytes() == q.scales.tobytes()


def test_low_rank_file(tmp_path):
    fit = fit_low_rank_svd(ScoreMatrix(gaussian(make_rng(2), 6, 10)), 3)
    path = tmp_path / "lr.bin"
    write_low_rank(path, fit)
    back = read_low_rank(path)
    assert back.r == 3
    assert back.z1.tobytes("F") == fit.z1.tobytes("F")
    assert back.z2.tobytes("F") == fit.z2.tobytes("F")


# --- FFN ---


def test_ffn_file(tmp_path, random_ffn):
    path = tmp_path / "f.bin"
    write_ffn(path, random_ffn)
    back = read_ffn(path)
    assert back.g == random_ffn.g
    assert back.u.equals(random_ffn.u)
    assert back.v.equals(random_ffn.v)


def test_common_path_without_dense_part(tmp_path, random_ffn):
    path = tmp_path / "c.bin"
    write_common_path(path, CommonPathFFN(None, random_ffn))
    back = read_common_path(path)
    assert back.dense_part is None
    assert back.m2 == random_ffn.m


def test_common_path_with_dense_part(tmp_path, random_ffn):
    rng = make_rng(3)
    u = ScoreMatrix(gaussian(rng, random_ffn.d, 4))
    dense = GroupedFFN(u, ScoreMatrix(gaussian(rng, random_ffn.d, 4)), 1)
    path = tmp_path / "c.bin"
    write_common_path(path, CommonPathFFN(dense, random_ffn))
    back = read_common_path(path)
    assert back.m1 == 4
    assert back.dense_part is not None
    assert back.dense_part.u.equals(dense.u)
    assert back.sparse_part.v.equals(random_ffn.v)
