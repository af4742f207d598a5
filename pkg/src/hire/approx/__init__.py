"""Cheap approximations of score matrices: int4, low rank, both, and bf16 rounding."""

from hire.approx.bf16 import round_bf16
from hire.approx.lowrank import (
    LowRankApprox,
    fit_low_rank_svd,
    random_low_rank,
    relative_residual,
)
from hire.approx.quantize import QuantizedMatrix, quantize_array, quantize_int4
from hire.approx.scorers import (
    ApproxScorer,
    ExactCopyScorer,
    LowRankQuantizedScorer,
    LowRankScorer,
    QuantizedScorer,
    ScorerKind,
    approx_scores,
    exact_copy,
    quantized,
)

__all__ = [
    "ApproxScorer",
    "ExactCopyScorer",
    "LowRankApprox",
    "LowRankQuantizedScorer",
    "LowRankScorer",
    "QuantizedMatrix",
    "QuantizedScorer",
    "ScorerKind",
    "approx_scores",
    "exact_copy",
    "fit_low_rank_svd",
    "quantize_array",
    "quantize_int4",
    "quantized",
    "random_low_rank",
    "relative_residual",
    "round_bf16",
]
