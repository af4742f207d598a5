"""Simulated multi-device approximate top-k."""

from hire.distributed.da_topk import CommReport, da_group_sparse, da_topk
from hire.distributed.sharding import Shard, ShardedScorer, partition, shard

__all__ = [
    "CommReport",
    "Shard",
    "ShardedScorer",
    "da_group_sparse",
    "da_topk",
    "partition",
    "shard",
]
