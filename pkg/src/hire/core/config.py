"""Selection parameters for the approximate top-k path."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hire.common.models import ActivationKind


class HireConfig(BaseModel):
    """Final count k, candidate count k′ and the activation applied before ranking."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(ge=1)
    k_prime: int = Field(ge=1)
    phi: ActivationKind = ActivationKind.IDENTITY

    @model_validator(mode="after")
    def _k_within_k_prime(self) -> HireConfig:
        if self.k > self.k_prime:
            raise ValueError(f"k={self.k} must not exceed k_prime={self.k_prime}")
        return self
