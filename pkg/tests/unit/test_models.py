"""Tests for the shared domain types."""

import numpy as np
import pytest

from hire.common.errors import DimensionMismatchError, InvalidInputError
from hire.common.models import (
    ActivationKind,
    GroupIndexSet,
    ScoreMatrix,
    TopKSet,
    as_vector,
    format_real,
)


def test_activation_values():
    assert ActivationKind("relu") == ActivationKind.RELU
    assert {a.value for a in ActivationKind} == {"identity", "relu", "squared_relu"}


def test_as_vector_converts_to_float32():
    v = as_vector([1, 2, 3])
    assert v.dtype == np.float32
    assert v.tolist() == [1.0, 2.0, 3.0]


def test_as_vector_rejects_wrong_dim():
    with pytest.raises(DimensionMismatchError, match="expected dim 3"):
        as_vector([1.0, 2.0], 3)


def test_as_vector_rejects_nan_and_2d():
    with pytest.raises(InvalidInputError):
        as_vector([1.0, float("nan")])
    with pytest.raises(InvalidInputError):
        as_vector([[1.0]])


class TestScoreMatrix:
    def test_frozen_and_column_major(self):
        z = ScoreMatrix(np.arange(6, dtype=np.float32).reshape(2, 3))
        assert z.shape == (2, 3)
        assert z.values.flags.f_contiguous
        with pytest.raises(ValueError):
            z.values[0, 0] = 9.0

    def test_copy_is_independent_of_source(self):
        src = np.ones((2, 2), dtype=np.float32)
        z = ScoreMatrix(src)
        src[0, 0] = 5.0
        assert z.values[0, 0] == 1.0

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError, match="non-finite"):
            ScoreMatrix(np.array([[1.0, np.inf]]))

    def test_column_is_read_only_view(self):
        z = ScoreMatrix(np.arange(6, dtype=np.float32).reshape(2, 3))
        col = z.column(2)
        assert col.tolist() == [2.0, 5.0]
        assert col.dtype == np.float32
        with pytest.raises(ValueError):
            col[0] = 1.0

    def test_restrict_keeps_given_order(self):
        z = ScoreMatrix(np.array([[0, 1, 2, 3]], dtype=np.float32))
        assert z.restrict([3, 1]).values.tolist() == [[3.0, 1.0]]

    def test_slice_and_hstack_round_trip(self):
        z = ScoreMatrix(np.arange(12, dtype=np.float32).reshape(3, 4))
        assert ScoreMatrix.hstack([z.slice(0, 1), z.slice(1, 4)]).equals(z)


class TestTopKSet:
    def test_serialize_shortest_text(self):
        top = TopKSet(
            indices=np.array([2, 0], dtype=np.int64),
            values=np.array([1.5, 0.1], dtype=np.float32),
            k=2,
        )
        assert top.serialize() == "0,2,1.5\n1,0,0.1"
        assert top.entries == [(2, 1.5), (0, pytest.approx(0.1))]

    def test_same_as_ignores_flags(self):
        idx = np.array([1], dtype=np.int64)
        val = np.array([2.0], dtype=np.float32)
        assert TopKSet(idx, val, 1).same_as(TopKSet(idx.copy(), val.copy(), 1, clamped=True))


class TestGroupIndexSet:
    def test_sorted_unique(self):
        s = GroupIndexSet(np.array([3, 1, 3]), 4)
        assert s.ids.tolist() == [1, 3]
        assert len(s) == 2

    def test_units(self):
        assert GroupIndexSet(np.array([1, 3]), 4).units(2).tolist() == [2, 3, 6, 7]

    def test_out_of_range(self):
        with pytest.raises(InvalidInputError):
            GroupIndexSet(np.array([4]), 4)


def test_format_real_integers_drop_trailing_dot():
    assert format_real(2.0) == "2"
    assert format_real(-0.25) == "-0.25"
