"""Dense, top-k, group-sparse and common-path feedforward layers."""

from hire.ffn.group_sparse import (
    check_group_counts,
    ffn_common_path,
    ffn_group_sparse,
    ffn_union_sparse,
    group_proxy,
    group_sums,
    per_sample_groups,
    select_groups,
    union_group_select,
)
from hire.ffn.layers import CommonPathFFN, GroupedFFN, ffn_dense, ffn_restricted, ffn_topk

__all__ = [
    "CommonPathFFN",
    "GroupedFFN",
    "check_group_counts",
    "ffn_common_path",
    "ffn_dense",
    "ffn_group_sparse",
    "ffn_restricted",
    "ffn_topk",
    "ffn_union_sparse",
    "group_proxy",
    "group_sums",
    "per_sample_groups",
    "select_groups",
    "union_group_select",
]
