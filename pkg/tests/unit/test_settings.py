"""Tests for settings and the error hierarchy."""

import pytest
import structlog

from hire.cli.config import ExperimentConfig
from hire.common.errors import (
    AllocationError,
    ConfigError,
    ConvergenceError,
    DimensionMismatchError,
    DivisibilityError,
    FormatError,
    HireError,
)
from hire.common.logging import bind_run
from hire.common.settings import get_settings, reset_settings


def test_defaults():
    s = get_settings()
    assert s.svd_method == "lapack"
    assert s.max_workers == 4
    assert s.default_group_size == 8
    assert s.log_format == "json"


def test_env_override(monkeypatch):
    monkeypatch.setenv("HIRE_MAX_WORKERS", "2")
    monkeypatch.setenv("HIRE_SVD_METHOD", "power")
    reset_settings()
    assert get_settings().max_workers == 2
    assert get_settings().svd_method == "power"


def test_singleton():
    assert get_settings() is get_settings()


# --- Errors ---


def test_error_messages_name_the_operands():
    assert "expected dim 4, got 3" in str(DimensionMismatchError("x", 4, 3))
    err = DivisibilityError("k", 10, "g", 4)
    assert "g=4" in str(err) and "k=10" in str(err)
    assert "'mode'" in str(ConfigError("mode", "required"))


def test_convergence_error_carries_residual():
    err = ConvergenceError("stalled", residual=0.5, iterations=10)
    assert err.residual == 0.5
    assert err.iterations == 10


@pytest.mark.parametrize(
    "exc, base",
    [
        (FormatError("bad"), OSError),
        (AllocationError("big"), MemoryError),
        (DimensionMismatchError("x", 1, 2), ValueError),
        (ConfigError("k", "bad"), ValueError),
    ],
)
def test_errors_keep_builtin_bases(exc, base):
    assert isinstance(exc, HireError)
    assert isinstance(exc, base)


def test_group_size_default_from_env(monkeypatch):
    monkeypatch.setenv("HIRE_DEFAULT_GROUP_SIZE", "4")
    reset_settings()
    assert ExperimentConfig(mode="ffn").g == 4


# --- Logging ---


def test_bind_run_replaces_context():
    bind_run(mode="ffn", seed=1)
    bind_run(mode="cost", seed=2)
    assert structlog.contextvars.get_contextvars() == {"mode": "cost", "seed": 2}
    structlog.contextvars.clear_contextvars()
