"""Tests for fixed-order kernels and top-k selection."""

from __future__ import annotations

import numpy as np
import pytest

from hire.common.errors import DimensionMismatchError, InvalidInputError
from hire.common.models import ActivationKind, ScoreMatrix
from hire.common.rng import gaussian, make_rng
from hire.linalg import accumulate_rows, activate, exact_topk, matvec, topk_select


# --- Kernels ---


def test_activations():
    z = np.array([-2.0, 3.0], dtype=np.float32)
    assert activate(z, ActivationKind.IDENTITY).tolist() == [-2.0, 3.0]
    assert activate(z, ActivationKind.RELU).tolist() == [0.0, 3.0]
    assert activate(z, ActivationKind.SQUARED_RELU).tolist() == [0.0, 9.0]


def test_matvec_identity_matrix():
    z = ScoreMatrix(np.eye(3, dtype=np.float32))
    assert matvec(z, [3, 1, 2]).tolist() == [3.0, 1.0, 2.0]


def test_matvec_relu_hand_inner_products(four_columns):
    assert matvec(four_columns, [2, 1], ActivationKind.RELU).tolist() == [2.0, 1.0, 3.0, 0.0]


def test_matvec_zero_matrix():
    z = ScoreMatrix(np.zeros((2, 3), dtype=np.float32))
    assert matvec(z, [5, -1], ActivationKind.RELU).tolist() == [0.0, 0.0, 0.0]


def test_matvec_dimension_mismatch(four_columns):
    with pytest.raises(DimensionMismatchError, match="expected dim 2, got 3"):
        matvec(four_columns, [1, 2, 3])


def test_matvec_close_to_blas(random_instance):
    z, x = random_instance
    ref = z.values.astype(np.float64).T @ x.astype(np.float64)
    np.testing.assert_allclose(matvec(z, x), ref, rtol=1e-4, atol=1e-4)


def test_restricted_columns_bit_identical(random_instance):
    z, x = random_instance
    cols = np.array([5, 17, 3, 199])
    full = matvec(z, x)
    restricted = accumulate_rows(z.values[:, cols], x)
    assert restricted.tobytes() == full[cols].tobytes()


# --- Selection ---


def test_topk_tie_break_ascending_index():
    top = topk_select([0.5, 0.25, 0.25], 2)
    assert top.entries == [(0, 0.5), (1, 0.25)]


def test_topk_keeps_negative_values():
    assert topk_select([-1.0, -2.0], 2).entries == [(0, -1.0), (1, -2.0)]


def test_topk_matches_full_sort():
    v = gaussian(make_rng(3), 100)
    top = topk_select(v, 10)
    assert top.indices.tolist() == np.argsort(-v, kind="stable")[:10].tolist()
    assert np.all(np.diff(top.values) <= 0)


def test_topk_bounds():
    with pytest.raises(InvalidInputError):
        topk_select([1.0, 2.0], 0)
    with pytest.raises(InvalidInputError):
        topk_select([1.0, 2.0], 3)
    clamped = topk_select([1.0, 2.0], 3, clamp=True)
    assert clamped.clamped
    assert len(clamped) == 2


def test_exact_topk_examples(four_columns):
    eye = ScoreMatrix(np.eye(3, dtype=np.float32))
    assert exact_topk(eye, [3, 1, 2], 1).entries == [(0, 3.0)]
    top = exact_topk(four_columns, [2, 1], 2, ActivationKind.RELU)
    assert top.entries == [(2, 3.0), (0, 2.0)]


def test_exact_topk_ties():
    z = ScoreMatrix(np.array([[5.0, 7.0, 7.0]], dtype=np.float32))
    assert exact_topk(z, [1.0], 2).entries == [(1, 7.0), (2, 7.0)]


def test_exact_topk_clamps_k_above_l(four_columns):
    top = exact_topk(four_columns, [1, 1], 10)
    assert top.clamped
    assert len(top) == 4
    assert top.k == 10


@pytest.mark.parametrize("phi", list(ActivationKind))
def test_exact_topk_equals_select_on_matvec(random_instance, phi):
    z, x = random_instance
    assert exact_topk(z, x, 7, phi).same_as(topk_select(matvec(z, x, phi), 7))


def test_column_permutation_permutes_result(random_instance):
    z, x = random_instance
    perm = make_rng(5).permutation(z.l)
    permuted = z.restrict(perm)
    top = exact_topk(z, x, 5)
    top_p = exact_topk(permuted, x, 5)
    assert perm[top_p.indices].tolist() == top.indices.tolist()
