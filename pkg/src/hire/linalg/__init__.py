"""Dense kernels, activations and the exact top-k oracle."""

from hire.linalg.kernels import accumulate_rows, activate, combine_columns, matvec
from hire.linalg.topk import exact_topk, topk_select

__all__ = [
    "accumulate_rows",
    "activate",
    "combine_columns",
    "exact_topk",
    "matvec",
    "topk_select",
]
