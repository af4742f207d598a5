"""Little-endian binary formats.

    HIRM  u32 rows, u32 cols, rows·cols f32 column-major
    HIRV  u32 dim, dim f32
    HIRQ  u32 d, u32 l, l f32 scales, int4 codes two per byte (low nibble first), column-major
    HIRL  u32 d, u32 l, u32 r, Z1 (d×r) then Z2 (l×r), f32 column-major
    HIRF  u32 d, u32 m, u32 g, u32 m1, U then V (d×m), f32 column-major

A common-path bundle is two HIRF records: the dense part (m = m1, possibly empty) followed by
the sparse part.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
import numpy.typing as npt

from hire.approx.lowrank import LowRankApprox
from hire.approx.quantize import QuantizedMatrix
from hire.common.errors import FormatError
from hire.common.models import ActivationKind, ScoreMatrix, Vector, as_vector
from hire.ffn.layers import CommonPathFFN, GroupedFFN

MATRIX_MAGIC = b"HIRM"
VECTOR_MAGIC = b"HIRV"
QUANTIZED_MAGIC = b"HIRQ"
LOW_RANK_MAGIC = b"HIRL"
FFN_MAGIC = b"HIRF"

_F32 = np.dtype("<f4")


class _Reader:
    """Cursor over a byte buffer that raises FormatError on truncation."""

    def __init__(self, data: bytes, source: str) -> None:
        self.data = data
        self.pos = 0
        self.source = source

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"{self.source}: truncated at byte {self.pos}, wanted {n} more")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def magic(self, expected: bytes) -> None:
        got = self.take(4)
        if got != expected:
            raise FormatError(f"{self.source}: bad magic {got!r}, expected {expected!r}")

    def u32(self, count: int = 1) -> tuple[int, ...]:
        return struct.unpack(f"<{count}I", self.take(4 * count))

    def f32(self, count: int) -> npt.NDArray[np.float32]:
        return np.frombuffer(self.take(4 * count), dtype=_F32).astype(np.float32)

    def matrix(self, rows: int, cols: int) -> npt.NDArray[np.float32]:
        return self.f32(rows * cols).reshape((rows, cols), order="F")

    def done(self) -> None:
        if self.pos != len(self.data):
            raise FormatError(f"{self.source}: {len(self.data) - self.pos} trailing bytes")


def _payload(a: npt.ArrayLike) -> bytes:
    return np.asarray(a, dtype=_F32).tobytes(order="F")


def _open(path: Path | str) -> _Reader:
    p = Path(path)
    return _Reader(p.read_bytes(), str(p))


# --- Matrices and vectors ---

def matrix_bytes(z: ScoreMatrix) -> bytes:
    return MATRIX_MAGIC + struct.pack("<2I", z.d, z.l) + _payload(z.values)


def write_matrix(path: Path | str, z: ScoreMatrix) -> None:
    Path(path).write_bytes(matrix_bytes(z))


def read_matrix(path: Path | str) -> ScoreMatrix:
    r = _open(path)
    r.magic(MATRIX_MAGIC)
    rows, cols = r.u32(2)
    z = ScoreMatrix(r.matrix(rows, cols))
    r.done()
    return z


def write_vector(path: Path | str, x: npt.ArrayLike) -> None:
    v = as_vector(x)
    Path(path).write_bytes(VECTOR_MAGIC + struct.pack("<I", v.shape[0]) + _payload(v))


def read_vector(path: Path | str) -> Vector:
    r = _open(path)
    r.magic(VECTOR_MAGIC)
    (dim,) = r.u32()
    v = r.f32(dim)
    r.done()
    return as_vector(v)


# --- Quantized ---

def pack_int4(codes: npt.NDArray[np.int8]) -> bytes:
    """Two's-complement nibbles, column-major, low nibble first; odd counts pad with 0."""
    nibbles = (codes.reshape(-1, order="F").astype(np.int16) & 0xF).astype(np.uint8)
    if nibbles.size % 2:
        nibbles = np.append(nibbles, np.uint8(0))
    return (nibbles[0::2] | (nibbles[1::2] << 4)).astype(np.uint8).tobytes()


def unpack_int4(data: bytes, d: int, l: int) -> npt.NDArray[np.int8]:  # noqa: E741
    packed = np.frombuffer(data, dtype=np.uint8)
    nibbles = np.empty(packed.size * 2, dtype=np.int16)
    nibbles[0::2] = packed & 0xF
    nibbles[1::2] = packed >> 4
    signed = np.where(nibbles >= 8, nibbles - 16, nibbles)[: d * l]
    return signed.astype(np.int8).reshape((d, l), order="F")


def write_quantized(path: Path | str, q: QuantizedMatrix) -> None:
    Path(path).write_bytes(
        QUANTIZED_MAGIC
        + struct.pack("<2I", q.d, q.l)
        + _payload(q.scales)
        + pack_int4(q.codes)
    )


def read_quantized(path: Path | str) -> QuantizedMatrix:
    r = _open(path)
    r.magic(QUANTIZED_MAGIC)
    d, l = r.u32(2)  # noqa: E741
    scales = r.f32(l)
    codes = unpack_int4(r.take((d * l + 1) // 2), d, l)
    r.done()
    return QuantizedMatrix(codes, scales)


# --- Low rank ---

def write_low_rank(path: Path | str, approx: LowRankApprox) -> None:
    Path(path).write_bytes(
        LOW_RANK_MAGIC
        + struct.pack("<3I", approx.d, approx.l, approx.r)
        + _payload(approx.z1)
        + _payload(approx.z2)
    )


def read_low_rank(path: Path | str) -> LowRankApprox:
    r = _open(path)
    r.magic(LOW_RANK_MAGIC)
    d, l, rank = r.u32(3)  # noqa: E741
    z1 = r.matrix(d, rank)
    z2 = r.matrix(l, rank)
    r.done()
    return LowRankApprox(z1, z2)


# --- FFN bundles ---

def _ffn_record(d: int, f: GroupedFFN | None, m1: int) -> bytes:
    if f is None:
        return FFN_MAGIC + struct.pack("<4I", d, 0, 1, m1)
    return (
        FFN_MAGIC
        + struct.pack("<4I", f.d, f.m, f.g, m1)
        + _payload(f.u.values)
        + _payload(f.v.values)
    )


def _read_ffn_record(r: _Reader, phi: ActivationKind) -> tuple[GroupedFFN | None, int, int]:
    r.magic(FFN_MAGIC)
    d, m, g, m1 = r.u32(4)
    if m == 0:
        return None, d, m1
    u = r.matrix(d, m)
    v = r.matrix(d, m)
    return GroupedFFN(ScoreMatrix(u), ScoreMatrix(v), g, phi), d, m1


def write_ffn(path: Path | str, f: GroupedFFN) -> None:
    Path(path).write_bytes(_ffn_record(f.d, f, 0))


def read_ffn(path: Path | str, phi: ActivationKind = ActivationKind.RELU) -> GroupedFFN:
    r = _open(path)
    f, _, _ = _read_ffn_record(r, phi)
    r.done()
    if f is None:
        raise FormatError(f"{r.source}: FFN record has no hidden units")
    return f


def write_common_path(path: Path | str, c: CommonPathFFN) -> None:
    d = c.sparse_part.d
    Path(path).write_bytes(
        _ffn_record(d, c.dense_part, c.m1) + _ffn_record(d, c.sparse_part, c.m1)
    )


def read_common_path(
    path: Path | str, phi: ActivationKind = ActivationKind.RELU
) -> CommonPathFFN:
    r = _open(path)
    dense, _, m1 = _read_ffn_record(r, phi)
    sparse, _, _ = _read_ffn_record(r, phi)
    r.done()
    if sparse is None:
        raise FormatError(f"{r.source}: common-path bundle has an empty sparse part")
    if (0 if dense is None else dense.m) != m1:
        raise FormatError(f"{r.source}: dense record holds a different m1 than declared")
    return CommonPathFFN(dense, sparse)
