"""Group-sparse FFN with approximate group selection, the common-path hybrid and
union selection across parallel samples."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt

from hire.approx.scorers import ApproxScorer
from hire.common.errors import DimensionMismatchError, DivisibilityError, InvalidInputError
from hire.common.logging import get_logger
from hire.common.models import GroupIndexSet, Vector, as_vector
from hire.common.settings import get_settings
from hire.ffn.layers import CommonPathFFN, GroupedFFN, ffn_dense, ffn_restricted
from hire.linalg.kernels import accumulate_rows, activate
from hire.linalg.topk import topk_select

log = get_logger(__name__)


def group_sums(values: Vector, g: int) -> Vector:
    """Sum consecutive runs of g entries, in ascending order within each run."""
    runs = values.reshape(-1, g)
    out = np.zeros(runs.shape[0], dtype=np.float32)
    for t in range(g):
        out += runs[:, t]
    return out


def group_proxy(f: GroupedFFN, x: npt.ArrayLike, a: ApproxScorer) -> Vector:
    """Φ[j] = Σ_t |phi(approx score of unit j·g + t)|, one entry per group."""
    if a.d != f.d:
        raise DimensionMismatchError("scorer d vs FFN d", f.d, a.d)
    if a.l != f.m:
        raise DimensionMismatchError("scorer l vs FFN m", f.m, a.l)
    xv = as_vector(x, f.d)
    return group_sums(np.abs(a.scores(xv, f.phi)), f.g)


def check_group_counts(f: GroupedFFN, k: int, k_prime: int) -> tuple[int, int]:
    """Validate k, k′ against g and m; return them as group counts."""
    for name, value in (("k", k), ("k_prime", k_prime)):
        if value % f.g:
            raise DivisibilityError(name, value, "g", f.g)
    if not 1 <= k <= k_prime <= f.m:
        raise InvalidInputError(f"need 1 <= k={k} <= k_prime={k_prime} <= m={f.m}")
    return k // f.g, k_prime // f.g


def select_groups(
    f: GroupedFFN, x: Vector, a: ApproxScorer, k_groups: int, k_prime_groups: int
) -> GroupIndexSet:
    """Candidate groups from the approximate proxy, then the top groups by exact proxy."""
    proxy = group_proxy(f, x, a)
    candidates = GroupIndexSet(topk_select(proxy, k_prime_groups).indices, f.n_groups)
    units = candidates.units(f.g)
    exact_abs = np.abs(activate(accumulate_rows(f.u.values[:, units], x), f.phi))
    ranked = topk_select(group_sums(exact_abs, f.g), k_groups)
    return GroupIndexSet(candidates.ids[ranked.indices], f.n_groups)


def ffn_group_sparse(
    f: GroupedFFN, x: npt.ArrayLike, a: ApproxScorer, k: int, k_prime: int
) -> tuple[Vector, GroupIndexSet]:
    """Group-sparse forward pass: k/g groups chosen from k′/g approximate candidates."""
    k_groups, k_prime_groups = check_group_counts(f, k, k_prime)
    xv = as_vector(x, f.d)
    groups = select_groups(f, xv, a, k_groups, k_prime_groups)
    return ffn_restricted(f, xv, groups), groups


def ffn_common_path(
    c: CommonPathFFN, x: npt.ArrayLike, a: ApproxScorer, k: int, k_prime: int
) -> Vector:
    """Dense common path plus the group-sparse path; ``a`` approximates the sparse U."""
    sparse_out, _ = ffn_group_sparse(c.sparse_part, x, a, k, k_prime)
    if c.dense_part is None:
        return sparse_out
    return ffn_dense(c.dense_part, x) + sparse_out


def per_sample_groups(
    f: GroupedFFN,
    xs: Sequence[npt.ArrayLike],
    a: ApproxScorer,
    k: int,
    k_prime: int,
    *,
    max_workers: int | None = None,
) -> list[GroupIndexSet]:
    """Each sample's selected groups, in sample order."""
    if len(xs) == 0:
        raise InvalidInputError("need at least one sample")
    k_groups, k_prime_groups = check_group_counts(f, k, k_prime)
    vectors = [as_vector(x, f.d, what=f"sample {i}") for i, x in enumerate(xs)]
    workers = max_workers or get_settings().max_workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(lambda xv: select_groups(f, xv, a, k_groups, k_prime_groups), vectors)
        )


def union_group_select(
    f: GroupedFFN,
    xs: Sequence[npt.ArrayLike],
    a: ApproxScorer,
    k: int,
    k_prime: int,
    *,
    max_workers: int | None = None,
) -> GroupIndexSet:
    """Union of the per-sample group selections."""
    selections = per_sample_groups(f, xs, a, k, k_prime, max_workers=max_workers)
    union = GroupIndexSet(np.concatenate([s.ids for s in selections]), f.n_groups)
    log.debug("union_group_select", samples=len(xs), union_groups=len(union))
    return union


def ffn_union_sparse(
    f: GroupedFFN,
    xs: Sequence[npt.ArrayLike],
    a: ApproxScorer,
    k: int,
    k_prime: int,
    *,
    max_workers: int | None = None,
) -> tuple[list[Vector], GroupIndexSet]:
    """Every sample's output restricted to the union of all samples' selected groups."""
    union = union_group_select(f, xs, a, k, k_prime, max_workers=max_workers)
    return [ffn_restricted(f, x, union) for x in xs], union
