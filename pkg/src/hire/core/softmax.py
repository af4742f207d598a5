"""Full softmax and the top-k renormalized softmax."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hire.approx.scorers import ApproxScorer
from hire.common.errors import InvalidInputError
from hire.common.models import (
    ActivationKind,
    CandidateSet,
    IndexArray,
    ScoreMatrix,
    Vector,
)
from hire.core.config import HireConfig
from hire.core.hire import hire_topk
from hire.linalg.kernels import matvec


@dataclass(frozen=True, eq=False)
class SparseDistribution:
    """Probabilities over at most k classes, ordered like the top-k logits."""

    indices: IndexArray
    probabilities: Vector
    logits: Vector
    candidates: CandidateSet | None = None

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    @property
    def entries(self) -> list[tuple[int, float]]:
        return [
            (int(i), float(p)) for i, p in zip(self.indices, self.probabilities, strict=True)
        ]


def stable_softmax(logits: npt.ArrayLike) -> Vector:
    """exp(z − max z) / Σ, normalised in float64."""
    z = np.asarray(logits, dtype=np.float64)
    e = np.exp(z - z.max())
    return (e / e.sum()).astype(np.float32)


def softmax_full(w: ScoreMatrix, x: npt.ArrayLike) -> Vector:
    return stable_softmax(matvec(w, x))


def softmax_topk(
    w: ScoreMatrix, x: npt.ArrayLike, a: ApproxScorer, cfg: HireConfig
) -> SparseDistribution:
    """Renormalized softmax over the top-k logits found by the approximate path.

    Logits are the exact ones recomputed on the candidate set. Entries whose probability
    underflows to zero in float32 are dropped, so the support may be smaller than k.
    """
    if cfg.phi != ActivationKind.IDENTITY:
        raise InvalidInputError(f"softmax_topk needs the identity activation, got {cfg.phi}")
    top, candidates = hire_topk(x, w, a, cfg)
    probs = stable_softmax(top.values)
    keep = probs > 0
    return SparseDistribution(
        indices=top.indices[keep],
        probabilities=probs[keep],
        logits=top.values[keep],
        candidates=candidates,
    )
