"""Synthetic instances and scorer construction for experiment runs."""

from __future__ import annotations

from enum import StrEnum

import numpy as np

from hire.approx.lowrank import fit_low_rank_svd, random_low_rank
from hire.approx.scorers import (
    ApproxScorer,
    LowRankQuantizedScorer,
    LowRankScorer,
    exact_copy,
    quantized,
)
from hire.cli.config import ExperimentConfig, InstanceSource, ScorerVariant
from hire.common.models import ActivationKind, ScoreMatrix, Vector
from hire.common.rng import gaussian, make_rng
from hire.ffn.layers import CommonPathFFN, GroupedFFN
from hire.io.binary import read_matrix, read_vector


class Spectrum(StrEnum):
    FLAT = "flat"
    DECAYING = "decaying"


def gen_instance(
    d: int,
    l: int,  # noqa: E741
    seed: int,
    spectrum: Spectrum = Spectrum.FLAT,
    *stream: int,
) -> tuple[ScoreMatrix, Vector]:
    """A d×l score matrix and a query vector.

    ``flat`` draws Z with i.i.d. N(0, 1) entries. ``decaying`` builds Z = U·diag(σ)·Vᵀ from
    orthonormal U, V with σ_i ∝ 1/i, rescaled to the Frobenius norm of a Gaussian matrix.
    """
    z_rng = make_rng(seed, *stream, 0)
    x = gaussian(make_rng(seed, *stream, 1), d)
    if spectrum == Spectrum.FLAT:
        return ScoreMatrix(gaussian(z_rng, d, l)), x
    p = min(d, l)
    left, _ = np.linalg.qr(z_rng.standard_normal((d, p)))
    right, _ = np.linalg.qr(z_rng.standard_normal((l, p)))
    sigma = 1.0 / np.arange(1, p + 1, dtype=np.float64)
    z = (left * sigma) @ right.T
    z *= np.sqrt(d * l) / np.linalg.norm(z)
    return ScoreMatrix(z.astype(np.float32)), x


def load_instance(cfg: ExperimentConfig, trial: int) -> tuple[ScoreMatrix, Vector]:
    match cfg.instance:
        case InstanceSource.FILE:
            assert cfg.matrix_path is not None
            z = read_matrix(cfg.matrix_path)
            if cfg.vector_path is not None:
                return z, read_vector(cfg.vector_path)
            return z, gaussian(make_rng(cfg.seed, trial, 1), z.d)
        case InstanceSource.DECAYING:
            return gen_instance(cfg.d, cfg.l, cfg.seed, Spectrum.DECAYING, trial)
        case InstanceSource.RANDOM_GAUSSIAN:
            return gen_instance(cfg.d, cfg.l, cfg.seed, Spectrum.FLAT, trial)


def make_scorer(
    variant: ScorerVariant, z: ScoreMatrix, r: int, seed: int, *stream: int
) -> ApproxScorer:
    match variant:
        case ScorerVariant.EXACT:
            return exact_copy(z)
        case ScorerVariant.QUANTIZED:
            return quantized(z)
        case ScorerVariant.LOW_RANK:
            return LowRankScorer(fit_low_rank_svd(z, r))
        case ScorerVariant.LOW_RANK_QUANTIZED:
            return LowRankQuantizedScorer.from_low_rank(fit_low_rank_svd(z, r))
        case ScorerVariant.RANDOM_LOW_RANK:
            sketch_seed = int(make_rng(seed, *stream, 2).integers(2**32))
            return LowRankScorer(random_low_rank(z, r, sketch_seed))


def make_ffn(cfg: ExperimentConfig, trial: int) -> CommonPathFFN:
    """Gaussian FFN weights: m1 dense common-path units next to m − m1 grouped units.

    V is scaled by 1/√m so outputs stay O(1) as m grows.
    """
    rng = make_rng(cfg.seed, trial, 3)
    phi = cfg.activation
    scale = np.float32(1.0 / np.sqrt(cfg.m))

    def layer(units: int, g: int) -> GroupedFFN:
        u = ScoreMatrix(gaussian(rng, cfg.d, units))
        v = ScoreMatrix(gaussian(rng, cfg.d, units) * scale)
        return GroupedFFN(u, v, g, phi)

    dense = layer(cfg.m1, 1) if cfg.m1 else None
    return CommonPathFFN(dense, layer(cfg.sparse_units, cfg.g))


def sample_batch(cfg: ExperimentConfig, trial: int) -> list[Vector]:
    """``n_samples`` queries sharing a base vector, each with independent N(0, noise²) noise."""
    base = gaussian(make_rng(cfg.seed, trial, 4), cfg.d)
    noise = np.float32(cfg.sample_noise)
    return [
        base + noise * gaussian(make_rng(cfg.seed, trial, 5, u), cfg.d)
        for u in range(cfg.n_samples)
    ]
