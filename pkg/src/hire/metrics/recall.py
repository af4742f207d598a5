"""Recall of candidate sets against the exact top-k."""

from __future__ import annotations

from pydantic import BaseModel, Field

from hire.common.models import CandidateSet, TopKSet


class RecallReport(BaseModel):
    recall: float = Field(ge=0.0, le=1.0)
    intersection_k: int = Field(ge=0)
    top1_agree: bool


def recall(
    candidates: CandidateSet, exact: TopKSet, method: TopKSet | None = None
) -> RecallReport:
    """|S ∩ S′| / |S| for the exact top-k set S.

    With ``method`` (the approximate path's own top-k) the intersection and top-1 fields
    compare the two top-k sets; without it they are read off the candidate set, so the
    intersection is bounded by min(k′, k).
    """
    truth = exact.index_set
    hits = len(truth & candidates.index_set)
    if method is None:
        intersection = hits
        top1 = len(exact) > 0 and int(exact.indices[0]) in candidates.index_set
    else:
        intersection = len(truth & method.index_set)
        top1 = len(exact) > 0 and len(method) > 0 and exact.indices[0] == method.indices[0]
    return RecallReport(
        recall=hits / len(truth) if truth else 1.0,
        intersection_k=intersection,
        top1_agree=bool(top1),
    )
