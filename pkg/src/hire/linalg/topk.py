"""Deterministic top-k selection: value descending, ties by ascending index."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hire.common.errors import InvalidInputError
from hire.common.models import ActivationKind, ScoreMatrix, TopKSet, as_vector
from hire.linalg.kernels import matvec


def topk_select(v: npt.ArrayLike, k: int, *, clamp: bool = False) -> TopKSet:
    """Top-k entries of a precomputed score vector.

    ``clamp`` lets k > len(v) return all len(v) entries with the ``clamped`` flag set and
    ``k`` still holding the request; otherwise it is an error.
    """
    scores = as_vector(v, what="scores")
    n = scores.shape[0]
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    if k > n and not clamp:
        raise InvalidInputError(f"k={k} exceeds vector length {n}")
    # stable sort keeps ascending index among equal values
    order = np.argsort(-scores, kind="stable")[: min(k, n)].astype(np.int64)
    return TopKSet(indices=order, values=scores[order], k=k, clamped=k > n)


def exact_topk(
    z: ScoreMatrix,
    x: npt.ArrayLike,
    k: int,
    phi: ActivationKind = ActivationKind.IDENTITY,
) -> TopKSet:
    """Exact top-k of phi(Zᵀx); the oracle every approximate path is checked against."""
    return topk_select(matvec(z, x, phi), k, clamp=True)
