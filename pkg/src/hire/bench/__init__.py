"""Memory-transfer microbenchmarks."""

from hire.bench.gather import (
    GatherBenchConfig,
    GatherBenchResult,
    gather_selection,
    pinned_to_cpu,
    run_gather_bench,
    sweep_gather,
)

__all__ = [
    "GatherBenchConfig",
    "GatherBenchResult",
    "gather_selection",
    "pinned_to_cpu",
    "run_gather_bench",
    "sweep_gather",
]
