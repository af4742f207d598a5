"""Experiment configuration: a flat JSON document, overridable from the command line."""

from __future__ import annotations

from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from hire.common.models import ActivationKind
from hire.common.settings import get_settings


class Mode(StrEnum):
    SOFTMAX_TOPK = "softmax-topk"
    HIRE_TOPK = "hire-topk"
    FFN = "ffn"
    DISTRIBUTED = "distributed"
    BENCH_GATHER = "bench-gather"
    KPRIME_SWEEP = "kprime-sweep"
    PROJECTION_ABLATION = "projection-ablation"
    OVERLAP = "overlap"
    COST = "cost"


class ScorerVariant(StrEnum):
    EXACT = "exact"
    LOW_RANK = "low_rank"
    QUANTIZED = "quantized"
    LOW_RANK_QUANTIZED = "low_rank_quantized"
    RANDOM_LOW_RANK = "random_low_rank"


class InstanceSource(StrEnum):
    RANDOM_GAUSSIAN = "random-gaussian"
    DECAYING = "decaying"
    FILE = "file"


_FFN_MODES = {Mode.FFN, Mode.OVERLAP}
_VECTOR_MODES = {Mode.HIRE_TOPK, Mode.DISTRIBUTED, Mode.SOFTMAX_TOPK}


class ExperimentConfig(BaseModel):
    """Every field a mode may read; each mode validates the ones it needs."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: Mode
    seed: int = Field(default=0, ge=0)
    trials: int = Field(default=1, ge=1)

    # --- Dimensions ---
    d: int = Field(default=64, ge=1)
    l: int = Field(default=4096, ge=1)  # noqa: E741
    m: int = Field(default=256, ge=1)
    g: int = Field(default_factory=lambda: get_settings().default_group_size, ge=1)
    m1: int = Field(default=0, ge=0)
    m2: int | None = Field(default=None, ge=1)

    # --- Selection ---
    k: int = Field(default=32, ge=1)
    k_prime: list[int] = Field(default_factory=lambda: [128])
    r: int = Field(default=16, ge=1)
    scorer: ScorerVariant = ScorerVariant.QUANTIZED
    phi: ActivationKind | None = None
    include_approx_only: bool = False

    # --- Distribution / samples ---
    shards: int = Field(default=1, ge=1)
    n_samples: int = Field(default=4, ge=1)
    sample_noise: float = Field(default=0.5, ge=0.0)
    histogram_bins: int = Field(default=10, ge=1)

    # --- Instances ---
    instance: InstanceSource = InstanceSource.RANDOM_GAUSSIAN
    matrix_path: Path | None = None
    vector_path: Path | None = None

    # --- Gather bench ---
    g_values: list[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16, 32, 64])
    total_vectors: int = Field(default=1 << 16, ge=1)
    fraction_selected: float = Field(default=0.25, gt=0.0, le=1.0)
    repeats: int = Field(default=5, ge=3)

    # --- Output ---
    out: Path | None = None

    @field_validator("k_prime", mode="before")
    @classmethod
    def _listify(cls, value: Any) -> Any:
        return [value] if isinstance(value, int) else value

    @field_validator("k_prime")
    @classmethod
    def _positive(cls, value: list[int]) -> list[int]:
        if not value or any(kp < 1 for kp in value):
            raise ValueError("k_prime needs at least one positive value")
        return value

    @model_validator(mode="after")
    def _mode_fields(self) -> ExperimentConfig:
        if self.instance == InstanceSource.FILE:
            if self.mode in _FFN_MODES:
                raise ValueError("instance=file is not supported for FFN modes")
            if self.matrix_path is None:
                raise ValueError("matrix_path is required when instance=file")
            if self.mode in _VECTOR_MODES and self.vector_path is None:
                raise ValueError("vector_path is required when instance=file")
        if self.mode in (Mode.HIRE_TOPK, Mode.DISTRIBUTED, Mode.SOFTMAX_TOPK, Mode.COST):
            if len(self.k_prime) != 1:
                raise ValueError(f"k_prime must be a single value in mode {self.mode}")
        if self.mode in (Mode.HIRE_TOPK, Mode.DISTRIBUTED, Mode.SOFTMAX_TOPK):
            if self.k > self.k_prime[0]:
                raise ValueError("k must not exceed k_prime")
        if self.mode == Mode.SOFTMAX_TOPK and self.phi not in (None, ActivationKind.IDENTITY):
            raise ValueError("phi must be identity in mode softmax-topk")
        if self.mode in _FFN_MODES:
            if self.m1 >= self.m and self.m2 is None:
                raise ValueError("m1 must leave at least one group of sparse units in m")
            if self.m2 is not None and self.m2 + self.m1 != self.m:
                raise ValueError(f"m2 must equal m - m1 = {self.m - self.m1}")
        return self

    @property
    def sparse_units(self) -> int:
        return self.m2 if self.m2 is not None else self.m - self.m1

    @property
    def activation(self) -> ActivationKind:
        """Mode default: ReLU for FFN modes, identity otherwise."""
        if self.phi is not None:
            return self.phi
        return ActivationKind.RELU if self.mode in _FFN_MODES else ActivationKind.IDENTITY

    def dims(self) -> str:
        if self.mode in _FFN_MODES:
            return f"d={self.d},m={self.m},g={self.g},m1={self.m1}"
        if self.mode == Mode.BENCH_GATHER:
            return f"d={self.d},total_vectors={self.total_vectors}"
        return f"d={self.d},l={self.l}"
