"""Shared pytest fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from hire.common.models import ActivationKind, ScoreMatrix
from hire.common.rng import gaussian, make_rng
from hire.common.settings import reset_settings
from hire.ffn.layers import GroupedFFN


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    for name in (
        "HIRE_LOG_LEVEL",
        "HIRE_LOG_FORMAT",
        "HIRE_MAX_WORKERS",
        "HIRE_SVD_METHOD",
        "HIRE_DEFAULT_GROUP_SIZE",
    ):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def four_columns() -> ScoreMatrix:
    """Columns (1,0), (0,1), (1,1), (-1,-1)."""
    return ScoreMatrix(np.array([[1, 0, 1, -1], [0, 1, 1, -1]], dtype=np.float32))


@pytest.fixture
def random_instance() -> tuple[ScoreMatrix, np.ndarray]:
    z = ScoreMatrix(gaussian(make_rng(7, 0), 16, 200))
    return z, gaussian(make_rng(7, 1), 16)


@pytest.fixture
def random_ffn() -> GroupedFFN:
    rng = make_rng(11)
    return GroupedFFN(
        ScoreMatrix(gaussian(rng, 16, 64)),
        ScoreMatrix(gaussian(rng, 16, 64)),
        g=4,
        phi=ActivationKind.RELU,
    )


def row_matrix(values) -> ScoreMatrix:
    """A 1×l matrix, so with x=[1] the scores are exactly ``values``."""
    return ScoreMatrix(np.asarray([values], dtype=np.float32))
