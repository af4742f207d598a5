"""Contiguous column sharding of a score matrix and its approximation."""

from __future__ import annotations

from dataclasses import dataclass

from hire.approx.scorers import ApproxScorer
from hire.common.errors import DimensionMismatchError, InvalidInputError
from hire.common.models import ScoreMatrix


@dataclass(frozen=True, eq=False)
class Shard:
    """One simulated device: its columns of Z and of the approximation."""

    z: ScoreMatrix
    a: ApproxScorer
    offset: int

    @property
    def width(self) -> int:
        return self.z.l


@dataclass(frozen=True, eq=False)
class ShardedScorer:
    shards: tuple[Shard, ...]

    @property
    def s(self) -> int:
        return len(self.shards)

    @property
    def d(self) -> int:
        return self.shards[0].z.d

    @property
    def l(self) -> int:  # noqa: E743
        return sum(sh.width for sh in self.shards)

    @property
    def widths(self) -> list[int]:
        return [sh.width for sh in self.shards]

    @property
    def offsets(self) -> list[int]:
        return [sh.offset for sh in self.shards]

    def assemble(self) -> ScoreMatrix:
        """Reassemble the unsharded Z."""
        return ScoreMatrix.hstack([sh.z for sh in self.shards])


def partition(n: int, s: int) -> list[tuple[int, int]]:
    """Near-equal contiguous ranges; the first n mod s ranges are one wider."""
    if s < 1:
        raise InvalidInputError(f"shard count must be >= 1, got {s}")
    if s > n:
        raise InvalidInputError(f"shard count s={s} exceeds the {n} items to split")
    base, extra = divmod(n, s)
    bounds = []
    lo = 0
    for i in range(s):
        hi = lo + base + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def shard(z: ScoreMatrix, a: ApproxScorer, s: int) -> ShardedScorer:
    """Split Z and its approximation column-wise over s simulated devices."""
    if (a.d, a.l) != (z.d, z.l):
        raise DimensionMismatchError("scorer columns vs Z columns", z.l, a.l)
    return ShardedScorer(
        tuple(Shard(z.slice(lo, hi), a.columns(lo, hi), lo) for lo, hi in partition(z.l, s))
    )
