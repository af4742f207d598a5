"""Domain types shared across modules."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from hire.common.errors import DimensionMismatchError, InvalidInputError

Vector = npt.NDArray[np.float32]
IndexArray = npt.NDArray[np.int64]


# --- Activations ---

class ActivationKind(StrEnum):
    IDENTITY = "identity"
    RELU = "relu"
    SQUARED_RELU = "squared_relu"


# --- Vectors ---

def as_vector(x: npt.ArrayLike, dim: int | None = None, *, what: str = "x") -> Vector:
    """Validate and convert to a contiguous float32 1-D vector."""
    arr = np.ascontiguousarray(x, dtype=np.float32)
    if arr.ndim != 1:
        raise InvalidInputError(f"{what}: expected a 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(what, dim, arr.shape[0])
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{what}: non-finite entry")
    return arr


# --- Matrices ---

@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """A d×l float32 matrix stored column-major and frozen after construction."""

    values: npt.NDArray[np.float32]

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float32, order="F", copy=True)
        if arr.ndim != 2:
            raise InvalidInputError(f"score matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError(f"score matrix must be non-empty, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise InvalidInputError("score matrix has a non-finite entry")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def d(self) -> int:
        return int(self.values.shape[0])

    @property
    def l(self) -> int:  # noqa: E743
        return int(self.values.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.d, self.l

    def column(self, j: int) -> Vector:
        return self.values[:, j]

    def restrict(self, indices: npt.ArrayLike) -> ScoreMatrix:
        """Sub-matrix of the given columns, in the given order."""
        return ScoreMatrix(self.values[:, np.asarray(indices, dtype=np.int64)])

    def slice(self, lo: int, hi: int) -> ScoreMatrix:
        """Contiguous column range [lo, hi)."""
        return ScoreMatrix(self.values[:, lo:hi])

    @classmethod
    def hstack(cls, parts: Sequence[ScoreMatrix]) -> ScoreMatrix:
        return cls(np.concatenate([p.values for p in parts], axis=1))

    def equals(self, other: ScoreMatrix) -> bool:
        """Byte-level equality."""
        return self.shape == other.shape and self.values.tobytes("F") == other.values.tobytes("F")


# --- Selections ---

@dataclass(frozen=True, eq=False)
class TopKSet:
    """Selected (index, value) pairs, value descending, ties by ascending index."""

    indices: IndexArray
    values: Vector
    k: int
    clamped: bool = False

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    @property
    def entries(self) -> list[tuple[int, float]]:
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values, strict=True)]

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in self.indices)

    def same_as(self, other: TopKSet) -> bool:
        """Byte-equal indices and values (flags ignored)."""
        return (
            self.indices.tobytes() == other.indices.tobytes()
            and self.values.tobytes() == other.values.tobytes()
        )

    def serialize(self) -> str:
        """Stable text form, one ``rank,index,value`` row per entry."""
        return "\n".join(
            f"{rank},{int(i)},{format_real(v)}"
            for rank, (i, v) in enumerate(zip(self.indices, self.values, strict=True))
        )


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """Sorted unique column ids proposed by a scorer."""

    indices: IndexArray
    origin: str
    clamped: bool = False

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    @property
    def index_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in self.indices)


@dataclass(frozen=True, eq=False)
class GroupIndexSet:
    """Sorted unique group ids out of ``n_groups``."""

    ids: IndexArray
    n_groups: int

    def __post_init__(self) -> None:
        ids = np.unique(np.asarray(self.ids, dtype=np.int64))
        if ids.size and (ids[0] < 0 or ids[-1] >= self.n_groups):
            raise InvalidInputError(f"group id out of range [0, {self.n_groups})")
        object.__setattr__(self, "ids", ids)

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    @property
    def id_set(self) -> frozenset[int]:
        return frozenset(int(i) for i in self.ids)

    def units(self, g: int) -> IndexArray:
        """Hidden-unit indices covered by the selected groups, ascending."""
        return (self.ids[:, None] * g + np.arange(g, dtype=np.int64)[None, :]).reshape(-1)


def format_real(v: float | np.floating) -> str:
    """Shortest text that round-trips the float32 value."""
    return np.format_float_positional(np.float32(v), unique=True, trim="-")
