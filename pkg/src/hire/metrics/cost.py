"""Parameter-bytes cost model: bytes of weights each method has to move per query.

Exact weights are bf16 (2 bytes per entry), int4 codes are half a byte per entry.
"""

from __future__ import annotations

from pydantic import BaseModel

from hire.common.errors import InvalidInputError


class CostReport(BaseModel):
    bytes_baseline: int
    bytes_lr: int
    bytes_q: int
    bytes_lrq: int

    def rows(self) -> list[tuple[str, int]]:
        return [
            ("baseline", self.bytes_baseline),
            ("hire_lr", self.bytes_lr),
            ("hire_q", self.bytes_q),
            ("hire_lrq", self.bytes_lrq),
        ]

    @property
    def no_saving(self) -> list[str]:
        """Methods that move at least as many bytes as the baseline."""
        return [name for name, b in self.rows()[1:] if b >= self.bytes_baseline]


def _half_bytes(entries: int) -> int:
    return (entries + 1) // 2


def param_bytes(d: int, l: int, r: int, k_prime: int) -> CostReport:  # noqa: E741
    """Baseline 2dl; low rank 2(dr + rl + dk′); int4 dl/2 + 2dk′;
    int4 factors (dr + rl)/2 + 2dk′.

    Half-byte counts round up to whole bytes.
    """
    if d < 1 or l < 1 or r < 1:
        raise InvalidInputError(f"dims must be positive, got d={d}, l={l}, r={r}")
    if k_prime < 0:
        raise InvalidInputError(f"k_prime must be >= 0, got {k_prime}")
    gathered = 2 * d * k_prime
    return CostReport(
        bytes_baseline=2 * d * l,
        bytes_lr=2 * (d * r + r * l + d * k_prime),
        bytes_q=_half_bytes(d * l) + gathered,
        bytes_lrq=_half_bytes(d * r + r * l) + gathered,
    )
