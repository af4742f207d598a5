"""Recall, overlap and parameter-bytes metrics."""

from hire.metrics.cost import CostReport, param_bytes
from hire.metrics.overlap import overlap_histogram, overlap_ratio
from hire.metrics.recall import RecallReport, recall

__all__ = [
    "CostReport",
    "RecallReport",
    "overlap_histogram",
    "overlap_ratio",
    "param_bytes",
    "recall",
]
