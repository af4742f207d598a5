"""Overlap of group selections across parallel samples."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from hire.common.errors import InvalidInputError
from hire.common.models import GroupIndexSet


def overlap_ratio(per_sample_sets: Sequence[GroupIndexSet], k_groups: int) -> float:
    """|∪ sets| / (s·k_groups), in [1/s, 1]."""
    if not per_sample_sets:
        raise InvalidInputError("need at least one selection")
    for i, sel in enumerate(per_sample_sets):
        if len(sel) != k_groups:
            raise InvalidInputError(f"selection {i} has {len(sel)} groups, expected {k_groups}")
    union: set[int] = set()
    for sel in per_sample_sets:
        union |= sel.id_set
    return len(union) / (len(per_sample_sets) * k_groups)


def overlap_histogram(
    ratios: Sequence[float], bins: int = 10
) -> list[tuple[float, float, int]]:
    """(bin_lo, bin_hi, count) rows over [0, 1]."""
    counts, edges = np.histogram(np.asarray(ratios, dtype=np.float64), bins=bins, range=(0.0, 1.0))
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(len(counts))
    ]
