"""Approximate candidate selection followed by exact recomputation on the candidates.

As long as the exact top-k indices fall inside the candidate set, the result is identical to
the exact top-k: every returned value is recomputed from Z, never taken from the scorer.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hire.approx.scorers import ApproxScorer
from hire.common.errors import DimensionMismatchError
from hire.common.models import (
    ActivationKind,
    CandidateSet,
    ScoreMatrix,
    TopKSet,
    Vector,
    as_vector,
)
from hire.core.config import HireConfig
from hire.linalg.kernels import accumulate_rows, activate
from hire.linalg.topk import topk_select


def _check_scorer(z: ScoreMatrix, a: ApproxScorer) -> None:
    if a.d != z.d:
        raise DimensionMismatchError("scorer d vs Z.d", z.d, a.d)
    if a.l != z.l:
        raise DimensionMismatchError("scorer l vs Z.l", z.l, a.l)


def select_candidates(
    a: ApproxScorer, x: Vector, k_prime: int, phi: ActivationKind
) -> CandidateSet:
    """Top-k′ indices of phi(Z_approxᵀx), returned sorted ascending."""
    ranked = topk_select(a.scores(x, phi), k_prime, clamp=True)
    return CandidateSet(
        indices=np.sort(ranked.indices), origin=a.kind.value, clamped=ranked.clamped
    )


def exact_on_candidates(
    z: ScoreMatrix, x: Vector, candidates: CandidateSet, k: int, phi: ActivationKind
) -> TopKSet:
    """Top-k of phi(Z|_{S′}ᵀx) over the candidate columns only, with global indices."""
    cand = candidates.indices
    values = activate(accumulate_rows(z.values[:, cand], x), phi)
    local = topk_select(values, k, clamp=True)
    return TopKSet(
        indices=cand[local.indices],
        values=local.values,
        k=local.k,
        clamped=local.clamped or candidates.clamped,
    )


def hire_topk(
    x: npt.ArrayLike, z: ScoreMatrix, a: ApproxScorer, cfg: HireConfig
) -> tuple[TopKSet, CandidateSet]:
    """Approximate top-k of phi(Zᵀx) plus the candidate set it was drawn from."""
    _check_scorer(z, a)
    xv = as_vector(x, z.d)
    candidates = select_candidates(a, xv, cfg.k_prime, cfg.phi)
    return exact_on_candidates(z, xv, candidates, cfg.k, cfg.phi), candidates


def approx_only_topk(
    x: npt.ArrayLike, a: ApproxScorer, k: int, phi: ActivationKind = ActivationKind.IDENTITY
) -> TopKSet:
    """Top-k taken straight from the approximate scores, with no exact recomputation."""
    xv = as_vector(x, a.d)
    return topk_select(a.scores(xv, phi), k, clamp=True)
