"""Fixed-order float32 kernels.

Sums run in ascending index order with one vectorised pass per summand, so a column's score is
bit-identical whether it is computed alone, in a restricted sub-matrix or in the full matrix.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hire.common.models import ActivationKind, ScoreMatrix, Vector, as_vector

_ZERO = np.float32(0.0)


def activate(z: Vector, phi: ActivationKind) -> Vector:
    """Apply phi elementwise."""
    match phi:
        case ActivationKind.IDENTITY:
            return z
        case ActivationKind.RELU:
            return np.maximum(z, _ZERO)
        case ActivationKind.SQUARED_RELU:
            r = np.maximum(z, _ZERO)
            return r * r
    raise ValueError(f"unknown activation {phi!r}")


def accumulate_rows(m: npt.NDArray[np.float32], x: Vector) -> Vector:
    """Return mᵀx, summing rows in ascending order."""
    out = np.zeros(m.shape[1], dtype=np.float32)
    for i in range(m.shape[0]):
        out += m[i, :] * x[i]
    return out


def combine_columns(v: npt.NDArray[np.float32], coeffs: Vector) -> Vector:
    """Return Σ_j coeffs[j]·v[:, j], summing columns in ascending j."""
    out = np.zeros(v.shape[0], dtype=np.float32)
    for j in range(v.shape[1]):
        out += v[:, j] * coeffs[j]
    return out


def matvec(
    z: ScoreMatrix, x: npt.ArrayLike, phi: ActivationKind = ActivationKind.IDENTITY
) -> Vector:
    """phi(Zᵀx) as a length-l vector."""
    xv = as_vector(x, z.d, what="matvec x")
    return activate(accumulate_rows(z.values, xv), phi)
