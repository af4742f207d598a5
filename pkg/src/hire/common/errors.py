"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HireError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(HireError, ValueError):
    """Operand shapes disagree."""

    def __init__(self, what: str, expected: int, got: int) -> None:
        super().__init__(f"{what}: expected dim {expected}, got {got}")
        self.expected = expected
        self.got = got


class DivisibilityError(HireError, ValueError):
    """A count is not a multiple of the group size or shard count."""

    def __init__(self, name: str, value: int, divisor_name: str, divisor: int) -> None:
        super().__init__(f"{name}={value} is not divisible by {divisor_name}={divisor}")
        self.divisor_name = divisor_name
        self.divisor = divisor


class ShardWidthError(HireError, ValueError):
    """A per-shard quota exceeds the width of a shard."""


class ConvergenceError(HireError, ArithmeticError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message: str, *, residual: float, iterations: int) -> None:
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class FormatError(HireError, OSError):
    """A binary file has a bad magic or a truncated payload."""


class ConfigError(HireError, ValueError):
    """An experiment configuration field is missing or invalid."""

    def __init__(self, field: str, reason: str) -> None:
        super().__init__(f"config field '{field}': {reason}")
        self.field = field


class InvalidInputError(HireError, ValueError):
    """An operand violates a value constraint (non-finite entry, bad count)."""


class AllocationError(HireError, MemoryError):
    """A buffer could not be allocated within the configured budget."""
