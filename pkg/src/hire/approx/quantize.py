"""Symmetric per-column int4 weight quantization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hire.common.errors import InvalidInputError
from hire.common.models import ScoreMatrix

INT4_MAX = 7


@dataclass(frozen=True, eq=False)
class QuantizedMatrix:
    """int4 codes in {-7..7} (stored as int8, column-major) with one scale per column."""

    codes: npt.NDArray[np.int8]
    scales: npt.NDArray[np.float32]

    def __post_init__(self) -> None:
        codes = np.asfortranarray(self.codes, dtype=np.int8)
        scales = np.ascontiguousarray(self.scales, dtype=np.float32)
        if codes.ndim != 2 or scales.shape != (codes.shape[1],):
            raise InvalidInputError(
                f"codes {codes.shape} and scales {scales.shape} disagree on column count"
            )
        if np.abs(codes.astype(np.int16)).max(initial=0) > INT4_MAX:
            raise InvalidInputError("int4 code outside [-7, 7]")
        if (scales <= 0).any():
            raise InvalidInputError("int4 scales must be positive")
        codes.flags.writeable = False
        scales.flags.writeable = False
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "scales", scales)

    @property
    def d(self) -> int:
        return int(self.codes.shape[0])

    @property
    def l(self) -> int:  # noqa: E743
        return int(self.codes.shape[1])

    def dequantize(self) -> npt.NDArray[np.float32]:
        return np.asfortranarray(self.codes.astype(np.float32) * self.scales[None, :])

    def rows(self, lo: int, hi: int) -> QuantizedMatrix:
        """Row range [lo, hi) with the column scales unchanged."""
        return QuantizedMatrix(self.codes[lo:hi, :], self.scales)

    def columns(self, lo: int, hi: int) -> QuantizedMatrix:
        return QuantizedMatrix(self.codes[:, lo:hi], self.scales[lo:hi])


def quantize_array(values: npt.ArrayLike) -> QuantizedMatrix:
    """Quantize the columns of a 2-D array.

    scale[j] = max_i |A[i, j]| / 7 (1 for an all-zero column); codes round half away from zero.
    """
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2-D array, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvalidInputError("cannot quantize a non-finite entry")
    peak = np.abs(a).max(axis=0)
    scales = np.where(peak > 0, peak / INT4_MAX, 1.0).astype(np.float32)
    q = a / scales.astype(np.float64)[None, :]
    codes = np.sign(q) * np.floor(np.abs(q) + 0.5)
    codes = np.clip(codes, -INT4_MAX, INT4_MAX).astype(np.int8)
    return QuantizedMatrix(codes, scales)


def quantize_int4(z: ScoreMatrix) -> QuantizedMatrix:
    return quantize_array(z.values)
