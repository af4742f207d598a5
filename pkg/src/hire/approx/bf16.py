"""bfloat16 emulation over float32."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hire.common.models import Vector, as_vector

SIGN_MASK = np.uint32(0x80000000)
EXPONENT_MASK = np.uint32(0x7F800000)
MAX_FINITE_BITS = np.uint32(0x7F7F0000)  # 3.3895e38


def round_bf16(v: npt.ArrayLike) -> Vector:
    """Round each entry to the nearest bf16 value (ties to even), returned as float32.

    bf16 keeps the float32 exponent and the top 7 stored mantissa bits, so rounding happens
    on the low 16 bits of the float32 encoding. Finite inputs beyond the largest finite bf16
    saturate to it instead of rounding up to infinity.
    """
    x = as_vector(v, what="bf16 input")
    bits = x.view(np.uint32).astype(np.uint64)
    lsb = (bits >> 16) & 1
    rounded = ((bits + 0x7FFF + lsb) & 0xFFFF0000).astype(np.uint32)
    overflow = (rounded & EXPONENT_MASK) == EXPONENT_MASK
    rounded[overflow] = (rounded[overflow] & SIGN_MASK) | MAX_FINITE_BITS
    return rounded.view(np.float32)
