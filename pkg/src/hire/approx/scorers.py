"""Cheap stand-ins for a score matrix, all exposing ``scores(x, phi)``."""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from hire.approx.lowrank import LowRankApprox
from hire.approx.quantize import QuantizedMatrix, quantize_array, quantize_int4
from hire.common.models import ActivationKind, ScoreMatrix, Vector, as_vector
from hire.linalg.kernels import accumulate_rows, activate, matvec


class ScorerKind(StrEnum):
    EXACT = "exact"
    LOW_RANK = "low_rank"
    QUANTIZED = "quantized"
    LOW_RANK_QUANTIZED = "low_rank_quantized"


class ApproxScorer(ABC):
    """Approximation of a d×l score matrix."""

    kind: ScorerKind

    @property
    @abstractmethod
    def d(self) -> int: ...

    @property
    @abstractmethod
    def l(self) -> int: ...  # noqa: E743

    @abstractmethod
    def raw_scores(self, x: Vector) -> Vector:
        """Approximate Zᵀx before the activation."""
        ...

    @abstractmethod
    def columns(self, lo: int, hi: int) -> ApproxScorer:
        """Scorer for the column range [lo, hi) of the underlying matrix."""
        ...

    def scores(
        self, x: npt.ArrayLike, phi: ActivationKind = ActivationKind.IDENTITY
    ) -> Vector:
        return activate(self.raw_scores(as_vector(x, self.d, what="scorer x")), phi)


class ExactCopyScorer(ApproxScorer):
    kind = ScorerKind.EXACT

    def __init__(self, z: ScoreMatrix) -> None:
        self.z = z

    @property
    def d(self) -> int:
        return self.z.d

    @property
    def l(self) -> int:  # noqa: E743
        return self.z.l

    def raw_scores(self, x: Vector) -> Vector:
        return matvec(self.z, x)

    def columns(self, lo: int, hi: int) -> ExactCopyScorer:
        return ExactCopyScorer(self.z.slice(lo, hi))


class LowRankScorer(ApproxScorer):
    """Scores as Z2·(Z1ᵀx): two skinny products, O(r(d + l))."""

    kind = ScorerKind.LOW_RANK

    def __init__(self, approx: LowRankApprox) -> None:
        self.approx = approx

    @property
    def d(self) -> int:
        return self.approx.d

    @property
    def l(self) -> int:  # noqa: E743
        return self.approx.l

    def raw_scores(self, x: Vector) -> Vector:
        projected = accumulate_rows(self.approx.z1, x)
        return accumulate_rows(self.approx.z2.T, projected)

    def columns(self, lo: int, hi: int) -> LowRankScorer:
        return LowRankScorer(self.approx.rows_of_z2(lo, hi))


class QuantizedScorer(ApproxScorer):
    """Inner products against int4 codes, scaled per column afterwards."""

    kind = ScorerKind.QUANTIZED

    def __init__(self, quantized: QuantizedMatrix) -> None:
        self.quantized = quantized
        self._codes = np.asfortranarray(quantized.codes.astype(np.float32))

    @property
    def d(self) -> int:
        return self.quantized.d

    @property
    def l(self) -> int:  # noqa: E743
        return self.quantized.l

    def raw_scores(self, x: Vector) -> Vector:
        return accumulate_rows(self._codes, x) * self.quantized.scales

    def columns(self, lo: int, hi: int) -> QuantizedScorer:
        return QuantizedScorer(self.quantized.columns(lo, hi))


class LowRankQuantizedScorer(ApproxScorer):
    """Low-rank scorer whose factors are int4-quantized per column.

    Scoring runs the low-rank path on the dequantized factors.
    """

    kind = ScorerKind.LOW_RANK_QUANTIZED

    def __init__(self, q1: QuantizedMatrix, q2: QuantizedMatrix) -> None:
        self.q1 = q1
        self.q2 = q2
        self.dequantized = LowRankApprox(q1.dequantize(), q2.dequantize())
        self._inner = LowRankScorer(self.dequantized)

    @classmethod
    def from_low_rank(cls, approx: LowRankApprox) -> LowRankQuantizedScorer:
        return cls(quantize_array(approx.z1), quantize_array(approx.z2))

    @property
    def d(self) -> int:
        return self.q1.d

    @property
    def l(self) -> int:  # noqa: E743
        return self.q2.d

    def raw_scores(self, x: Vector) -> Vector:
        return self._inner.raw_scores(x)

    def columns(self, lo: int, hi: int) -> LowRankQuantizedScorer:
        return LowRankQuantizedScorer(self.q1, self.q2.rows(lo, hi))


def exact_copy(z: ScoreMatrix) -> ExactCopyScorer:
    return ExactCopyScorer(z)


def quantized(z: ScoreMatrix) -> QuantizedScorer:
    return QuantizedScorer(quantize_int4(z))


def approx_scores(
    a: ApproxScorer, x: npt.ArrayLike, phi: ActivationKind = ActivationKind.IDENTITY
) -> Vector:
    """phi(Z_approxᵀx) for any scorer variant."""
    return a.scores(x, phi)
