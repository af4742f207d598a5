"""Process settings from environment variables."""

from __future__ import annotations

from typing import Literal

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Tunables loaded from HIRE_* environment variables (and .env)."""

    model_config = {"env_prefix": "HIRE_", "env_file": ".env", "extra": "ignore"}

    # --- Logging ---
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

    # --- Concurrency ---
    max_workers: int = 4  # sweep points / shards evaluated in parallel

    # --- Low-rank fitting ---
    svd_method: Literal["lapack", "power"] = "lapack"
    svd_max_iter: int = 1000
    svd_tol: float = 1e-9  # relative change in singular value

    # --- FFN ---
    default_group_size: int = 8

    # --- Gather microbenchmark ---
    bench_memory_budget_bytes: int = 1 << 30
    bench_pin_cpu: int = 0  # negative disables pinning


_settings: Settings | None = None


def get_settings() -> Settings:
    """Get cached settings singleton."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached singleton (for testing)."""
    global _settings
    _settings = None
