"""Distributed approximate top-k over simulated shards.

Each shard picks its top-(k′/s) candidates from its own approximation, recomputes them exactly
and keeps its top-(k/s); the shard results are concatenated and re-sorted globally. Shards run
as independent tasks; the merge only depends on their values, never on completion order.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel

from hire.approx.scorers import ApproxScorer
from hire.common.errors import DivisibilityError, ShardWidthError
from hire.common.logging import get_logger
from hire.common.models import CandidateSet, GroupIndexSet, TopKSet, Vector, as_vector
from hire.common.settings import get_settings
from hire.core.config import HireConfig
from hire.core.hire import hire_topk
from hire.distributed.sharding import ShardedScorer, partition
from hire.ffn.group_sparse import select_groups
from hire.ffn.layers import GroupedFFN, ffn_restricted

log = get_logger(__name__)

BYTES_PER_VALUE = 4


class CommReport(BaseModel):
    """Exact-weight traffic of the candidate recomputation."""

    bytes_gathered: int
    candidates_per_shard: list[int]
    values_concatenated: int


def _quota(name: str, value: int, divisor: int, divisor_name: str = "s") -> int:
    if value % divisor:
        raise DivisibilityError(name, value, divisor_name, divisor)
    return value // divisor


def _run_shards[T, R](
    fn: Callable[[T], R], items: Iterable[T], max_workers: int | None
) -> list[R]:
    workers = max_workers or get_settings().max_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def da_topk(
    sh: ShardedScorer,
    x: npt.ArrayLike,
    cfg: HireConfig,
    *,
    max_workers: int | None = None,
) -> tuple[TopKSet, CommReport]:
    k_shard = _quota("k", cfg.k, sh.s)
    k_prime_shard = _quota("k_prime", cfg.k_prime, sh.s)
    for i, width in enumerate(sh.widths):
        if k_shard > width:
            raise ShardWidthError(f"shard {i} has {width} columns, needs k/s={k_shard}")
    xv = as_vector(x, sh.d)
    shard_cfg = HireConfig(k=k_shard, k_prime=k_prime_shard, phi=cfg.phi)

    def run(i: int) -> tuple[TopKSet, CandidateSet]:
        part = sh.shards[i]
        return hire_topk(xv, part.z, part.a, shard_cfg)

    results = _run_shards(run, range(sh.s), max_workers)

    indices = np.concatenate(
        [top.indices + part.offset for (top, _), part in zip(results, sh.shards, strict=True)]
    )
    values = np.concatenate([top.values for top, _ in results])
    order = np.lexsort((indices, -values))
    merged = TopKSet(
        indices=indices[order],
        values=values[order],
        k=cfg.k,
        clamped=any(top.clamped for top, _ in results),
    )
    counts = [len(cand) for _, cand in results]
    report = CommReport(
        bytes_gathered=sum(counts) * sh.d * BYTES_PER_VALUE,
        candidates_per_shard=counts,
        values_concatenated=len(merged),
    )
    if merged.clamped:
        log.warning("da_topk_candidates_clamped", k_prime=cfg.k_prime, widths=sh.widths)
    return merged, report


def da_group_sparse(
    f: GroupedFFN,
    x: npt.ArrayLike,
    a: ApproxScorer,
    s: int,
    k: int,
    k_prime: int,
    *,
    max_workers: int | None = None,
) -> tuple[Vector, GroupIndexSet]:
    """Group-sparse FFN with per-shard group quotas k/(s·g) out of k′/(s·g) candidates.

    Shards are contiguous runs of whole groups, so no group straddles two devices.
    """
    block = s * f.g
    k_groups = _quota("k", k, block, "s*g")
    k_prime_groups = _quota("k_prime", k_prime, block, "s*g")
    bounds = partition(f.n_groups, s)
    for i, (lo, hi) in enumerate(bounds):
        if k_groups > hi - lo:
            raise ShardWidthError(f"shard {i} has {hi - lo} groups, needs {k_groups}")
    xv = as_vector(x, f.d)

    def run(bound: tuple[int, int]) -> GroupIndexSet:
        lo, hi = bound
        local = f.group_slice(lo, hi)
        local_a = a.columns(lo * f.g, hi * f.g)
        return select_groups(local, xv, local_a, k_groups, min(k_prime_groups, hi - lo))

    selections = _run_shards(run, bounds, max_workers)
    chosen = GroupIndexSet(
        np.concatenate([sel.ids + lo for sel, (lo, _) in zip(selections, bounds, strict=True)]),
        f.n_groups,
    )
    return ffn_restricted(f, xv, chosen), chosen
