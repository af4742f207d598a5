"""Grouped-gather microbenchmark.

A buffer of n groups × g vectors × d floats is gathered group-wise at random positions into a
contiguous destination and compared against a contiguous copy of the same byte count. Copies
are verified against the source after timing so neither path can be skipped.
"""

from __future__ import annotations

import math
import os
import statistics
import time
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hire.common.errors import AllocationError, HireError
from hire.common.logging import get_logger
from hire.common.rng import make_rng
from hire.common.settings import get_settings

log = get_logger(__name__)

ITEM_BYTES = 4


class GatherBenchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_groups: int = Field(ge=1)
    g: int = Field(ge=1)
    d: int = Field(ge=1)
    fraction_selected: float = Field(gt=0.0, le=1.0)
    repeats: int = Field(default=5, ge=3)
    seed: int = Field(default=0, ge=0)
    memory_budget_bytes: int = Field(
        default_factory=lambda: get_settings().bench_memory_budget_bytes
    )

    @property
    def buffer_bytes(self) -> int:
        return self.n_groups * self.g * self.d * ITEM_BYTES

    @property
    def n_selected(self) -> int:
        return math.ceil(self.fraction_selected * self.n_groups)

    @model_validator(mode="after")
    def _fits_budget(self) -> GatherBenchConfig:
        # source buffer plus the two destinations
        needed = self.buffer_bytes + 2 * self.n_selected * self.g * self.d * ITEM_BYTES
        if needed > self.memory_budget_bytes:
            raise ValueError(
                f"benchmark needs {needed} bytes, budget is {self.memory_budget_bytes}"
            )
        return self


class GatherBenchResult(BaseModel):
    g: int
    bytes: int
    selected_groups: int
    sparse_time: int  # ns, median over repeats
    dense_time: int  # ns, median over repeats
    efficiency_paper: float  # sparse / dense
    efficiency_ratio: float  # dense / sparse
    checksum_ok: bool


@contextmanager
def pinned_to_cpu(cpu: int) -> Iterator[None]:
    """Restrict the process to one CPU for the duration, where the platform allows it."""
    if cpu < 0 or not hasattr(os, "sched_setaffinity"):
        yield
        return
    previous = os.sched_getaffinity(0)
    try:
        os.sched_setaffinity(0, {cpu})
    except OSError as exc:
        log.warning("cpu_pin_failed", cpu=cpu, error=str(exc))
        yield
        return
    try:
        yield
    finally:
        os.sched_setaffinity(0, previous)


def _median_ns(op: Callable[[], object], repeats: int) -> int:
    samples = []
    for rep in range(repeats + 1):
        start = time.perf_counter_ns()
        op()
        elapsed = time.perf_counter_ns() - start
        if rep:  # first pass is warm-up
            samples.append(max(elapsed, 1))
    return int(statistics.median(samples))


def gather_selection(cfg: GatherBenchConfig) -> npt.NDArray[np.int64]:
    """Group ids to gather, drawn without replacement from the seeded selection stream."""
    ids = make_rng(cfg.seed, 1).choice(cfg.n_groups, size=cfg.n_selected, replace=False)
    return ids.astype(np.int64)


def run_gather_bench(cfg: GatherBenchConfig) -> GatherBenchResult:
    n_sel = cfg.n_selected
    n_elems = n_sel * cfg.g * cfg.d
    try:
        source = make_rng(cfg.seed).standard_normal(
            (cfg.n_groups, cfg.g, cfg.d), dtype=np.float32
        )
        sparse_dst = np.empty((n_sel, cfg.g, cfg.d), dtype=np.float32)
        dense_dst = np.empty(n_elems, dtype=np.float32)
    except MemoryError as exc:
        raise AllocationError(f"cannot allocate {cfg.buffer_bytes} bytes") from exc

    selected = gather_selection(cfg)
    flat = source.reshape(-1)

    with pinned_to_cpu(get_settings().bench_pin_cpu):
        sparse_ns = _median_ns(
            lambda: np.take(source, selected, axis=0, out=sparse_dst), cfg.repeats
        )
        dense_ns = _median_ns(lambda: np.copyto(dense_dst, flat[:n_elems]), cfg.repeats)

    checksum_ok = bool(
        np.array_equal(sparse_dst, source[selected]) and np.array_equal(dense_dst, flat[:n_elems])
    )
    if not checksum_ok:
        raise HireError("gathered bytes differ from the source buffer")
    if sparse_dst.nbytes != dense_dst.nbytes:
        raise HireError("sparse and dense paths moved different byte counts")

    result = GatherBenchResult(
        g=cfg.g,
        bytes=int(dense_dst.nbytes),
        selected_groups=n_sel,
        sparse_time=sparse_ns,
        dense_time=dense_ns,
        efficiency_paper=sparse_ns / dense_ns,
        efficiency_ratio=dense_ns / sparse_ns,
        checksum_ok=checksum_ok,
    )
    log.info(
        "gather_bench_done",
        g=cfg.g,
        bytes=result.bytes,
        sparse_ns=sparse_ns,
        dense_ns=dense_ns,
    )
    return result


def sweep_gather(
    g_values: Sequence[int],
    *,
    total_vectors: int,
    d: int,
    fraction_selected: float,
    repeats: int = 5,
    seed: int = 0,
) -> list[GatherBenchResult]:
    """Run the bench for each group size at a fixed total buffer size, one after another."""
    results = []
    for g in g_values:
        n_groups = total_vectors // g
        if n_groups < 1:
            raise HireError(f"group size g={g} exceeds total_vectors={total_vectors}")
        cfg = GatherBenchConfig(
            n_groups=n_groups,
            g=g,
            d=d,
            fraction_selected=fraction_selected,
            repeats=repeats,
            seed=seed,
        )
        results.append(run_gather_bench(cfg))
    return results
