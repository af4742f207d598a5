"""Approximate top-k with exact recomputation, and the softmax built on it."""

from hire.core.config import HireConfig
from hire.core.hire import approx_only_topk, exact_on_candidates, hire_topk, select_candidates
from hire.core.softmax import SparseDistribution, softmax_full, softmax_topk, stable_softmax

__all__ = [
    "HireConfig",
    "SparseDistribution",
    "approx_only_topk",
    "exact_on_candidates",
    "hire_topk",
    "select_candidates",
    "softmax_full",
    "softmax_topk",
    "stable_softmax",
]
