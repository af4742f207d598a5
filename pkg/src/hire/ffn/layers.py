"""Two-layer FFN weights with contiguous unit groups, and the dense / top-k forward passes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hire.common.errors import DimensionMismatchError, DivisibilityError, InvalidInputError
from hire.common.models import ActivationKind, GroupIndexSet, ScoreMatrix, Vector, as_vector
from hire.linalg.kernels import accumulate_rows, activate, combine_columns, matvec
from hire.linalg.topk import exact_topk


@dataclass(frozen=True, eq=False)
class GroupedFFN:
    """First layer U (d×m, columns u_j), second layer V (d×m, columns v_j), groups of g units.

    Group j covers units [j·g, (j+1)·g).
    """

    u: ScoreMatrix
    v: ScoreMatrix
    g: int = 8
    phi: ActivationKind = ActivationKind.RELU

    def __post_init__(self) -> None:
        if self.u.shape != self.v.shape:
            raise DimensionMismatchError("FFN V columns vs U columns", self.u.l, self.v.l)
        if self.g < 1:
            raise InvalidInputError(f"group size must be >= 1, got {self.g}")
        if self.m % self.g:
            raise DivisibilityError("m", self.m, "g", self.g)

    @property
    def d(self) -> int:
        return self.u.d

    @property
    def m(self) -> int:
        return self.u.l

    @property
    def n_groups(self) -> int:
        return self.m // self.g

    def group_slice(self, lo: int, hi: int) -> GroupedFFN:
        """FFN over the groups [lo, hi)."""
        return GroupedFFN(
            self.u.slice(lo * self.g, hi * self.g),
            self.v.slice(lo * self.g, hi * self.g),
            self.g,
            self.phi,
        )


@dataclass(frozen=True, eq=False)
class CommonPathFFN:
    """A dense common path of m1 units next to a group-sparse path of m2 units."""

    dense_part: GroupedFFN | None
    sparse_part: GroupedFFN

    def __post_init__(self) -> None:
        if self.dense_part is not None and self.dense_part.d != self.sparse_part.d:
            raise DimensionMismatchError(
                "common path d vs sparse path d", self.sparse_part.d, self.dense_part.d
            )

    @property
    def m1(self) -> int:
        return 0 if self.dense_part is None else self.dense_part.m

    @property
    def m2(self) -> int:
        return self.sparse_part.m

    def concatenated(self) -> GroupedFFN:
        """All m1 + m2 units as one FFN (group size 1), dense units first."""
        if self.dense_part is None:
            return GroupedFFN(self.sparse_part.u, self.sparse_part.v, 1, self.sparse_part.phi)
        return GroupedFFN(
            ScoreMatrix.hstack([self.dense_part.u, self.sparse_part.u]),
            ScoreMatrix.hstack([self.dense_part.v, self.sparse_part.v]),
            1,
            self.sparse_part.phi,
        )


def ffn_dense(f: GroupedFFN, x: npt.ArrayLike) -> Vector:
    """Σ_j phi(⟨u_j, x⟩)·v_j over every unit, ascending j."""
    acts = matvec(f.u, x, f.phi)
    return combine_columns(f.v.values, acts)


def ffn_topk(f: GroupedFFN, x: npt.ArrayLike, k: int) -> Vector:
    """The sum restricted to the exact top-k activations."""
    if not 1 <= k <= f.m:
        raise InvalidInputError(f"k={k} outside [1, m={f.m}]")
    xv = as_vector(x, f.d)
    acts = matvec(f.u, xv, f.phi)
    chosen = np.sort(exact_topk(f.u, xv, k, f.phi).indices)
    return combine_columns(f.v.values[:, chosen], acts[chosen])


def ffn_restricted(f: GroupedFFN, x: npt.ArrayLike, groups: GroupIndexSet) -> Vector:
    """The sum over every unit of the given groups, with exact U and V inner products."""
    xv = as_vector(x, f.d)
    units = groups.units(f.g)
    acts = activate(accumulate_rows(f.u.values[:, units], xv), f.phi)
    return combine_columns(f.v.values[:, units], acts)
