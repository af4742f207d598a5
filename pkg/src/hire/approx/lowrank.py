"""Low-rank factorizations Z ≈ Z1·Z2ᵀ: truncated SVD fits and random sketches."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from hire.common.errors import ConvergenceError, DimensionMismatchError, InvalidInputError
from hire.common.logging import get_logger
from hire.common.models import ScoreMatrix
from hire.common.rng import make_rng
from hire.common.settings import get_settings

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class LowRankApprox:
    """Factors Z1 (d×r) and Z2 (l×r); the d×l product is never formed for scoring."""

    z1: npt.NDArray[np.float32]
    z2: npt.NDArray[np.float32]

    def __post_init__(self) -> None:
        z1 = np.array(self.z1, dtype=np.float32, order="F", copy=True)
        z2 = np.array(self.z2, dtype=np.float32, order="F", copy=True)
        if z1.ndim != 2 or z2.ndim != 2:
            raise InvalidInputError("low-rank factors must be 2-D")
        if z1.shape[1] != z2.shape[1]:
            raise DimensionMismatchError("low-rank factor rank", z1.shape[1], z2.shape[1])
        if z1.shape[1] < 1:
            raise InvalidInputError("rank must be >= 1")
        if not (np.isfinite(z1).all() and np.isfinite(z2).all()):
            raise InvalidInputError("low-rank factor has a non-finite entry")
        z1.flags.writeable = False
        z2.flags.writeable = False
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)

    @property
    def d(self) -> int:
        return int(self.z1.shape[0])

    @property
    def l(self) -> int:  # noqa: E743
        return int(self.z2.shape[0])

    @property
    def r(self) -> int:
        return int(self.z1.shape[1])

    def rows_of_z2(self, lo: int, hi: int) -> LowRankApprox:
        """Factorization of the column range [lo, hi) of Z."""
        return LowRankApprox(self.z1, self.z2[lo:hi, :])

    def reconstruct(self) -> npt.NDArray[np.float64]:
        """Dense d×l product, for diagnostics only."""
        return self.z1.astype(np.float64) @ self.z2.astype(np.float64).T


def relative_residual(z: ScoreMatrix, approx: LowRankApprox) -> float:
    """‖Z − Z1Z2ᵀ‖_F / ‖Z‖_F (0 for a zero Z reproduced exactly)."""
    a = z.values.astype(np.float64)
    norm = float(np.linalg.norm(a))
    err = float(np.linalg.norm(a - approx.reconstruct()))
    return err / norm if norm > 0 else err


def fit_low_rank_svd(
    z: ScoreMatrix,
    r: int,
    *,
    method: str | None = None,
    max_iter: int | None = None,
    tol: float | None = None,
) -> LowRankApprox:
    """Rank-r truncated SVD fit: Z1 = U_r·Σ_r, Z2 = V_r.

    ``method`` is ``lapack`` (numpy SVD) or ``power`` (power iteration with deflation);
    defaults come from settings.
    """
    if not 1 <= r <= min(z.d, z.l):
        raise InvalidInputError(f"rank r={r} outside [1, {min(z.d, z.l)}]")
    settings = get_settings()
    method = method or settings.svd_method
    a = z.values.astype(np.float64)

    if method == "lapack":
        try:
            u, s, vt = np.linalg.svd(a, full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                f"LAPACK SVD did not converge: {exc}", residual=float("nan"), iterations=0
            ) from exc
        z1, z2 = u[:, :r] * s[None, :r], vt[:r, :].T
    elif method == "power":
        z1, z2 = _power_svd(
            a, r, max_iter or settings.svd_max_iter, tol if tol is not None else settings.svd_tol
        )
    else:
        raise InvalidInputError(f"unknown SVD method {method!r}")

    fit = LowRankApprox(z1, z2)
    log.debug("low_rank_fit", method=method, d=z.d, l=z.l, r=r)
    return fit


def _power_svd(
    a: npt.NDArray[np.float64], r: int, max_iter: int, tol: float
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Leading r singular triplets by power iteration on the smaller Gram matrix."""
    n_rows, n_cols = a.shape
    right_side = n_cols <= n_rows  # iterate on AᵀA when columns are the smaller side
    residual = a.copy()
    total = float(np.sum(a * a))
    n = n_cols if right_side else n_rows
    basis: list[npt.NDArray[np.float64]] = []
    z1 = np.zeros((n_rows, r))
    z2 = np.zeros((n_cols, r))

    for c in range(r):
        gram = residual.T @ residual if right_side else residual @ residual.T
        vec = make_rng(0, c).standard_normal(n)
        sigma_prev = 0.0
        sigma = 0.0
        converged = False
        for it in range(1, max_iter + 1):
            for b in basis:
                vec -= (b @ vec) * b
            w = gram @ vec
            norm = float(np.linalg.norm(w))
            if norm <= 1e-30 * max(total, 1e-300):
                sigma, converged = 0.0, True
                break
            vec = w / norm
            sigma = float(np.sqrt(max(vec @ gram @ vec, 0.0)))
            if abs(sigma - sigma_prev) <= tol * max(sigma, 1e-300):
                converged = True
                break
            sigma_prev = sigma
        if not converged:
            rel = float(np.linalg.norm(residual)) / max(np.sqrt(total), 1e-300)
            raise ConvergenceError(
                f"power iteration stalled on component {c}", residual=rel, iterations=max_iter
            )
        log.debug("power_svd_component", component=c, sigma=sigma, iterations=it)
        if sigma == 0.0:
            break  # remaining spectrum is zero; columns stay zero
        basis.append(vec)
        if right_side:
            v = vec
            u = residual @ v / sigma
        else:
            u = vec
            v = residual.T @ u / sigma
        z1[:, c] = u * sigma
        z2[:, c] = v
        residual -= sigma * np.outer(u, v)

    return z1, z2


def random_low_rank(
    z: ScoreMatrix, r: int, seed: int, *, orthonormal: bool = False
) -> LowRankApprox:
    """Gaussian sketch baseline: Z1 = G, Z2 = ZᵀG.

    G (d×r) has unit-norm columns, or orthonormal columns when ``orthonormal`` (needs r ≤ d);
    at r = d with orthonormal G the sketch reproduces Zᵀx up to rounding.
    """
    if r < 1:
        raise InvalidInputError(f"rank r={r} must be >= 1")
    g = make_rng(seed).standard_normal((z.d, r))
    if orthonormal:
        if r > z.d:
            raise InvalidInputError(f"orthonormal sketch needs r <= d, got r={r}, d={z.d}")
        g, _ = np.linalg.qr(g)
    else:
        g /= np.linalg.norm(g, axis=0, keepdims=True)
    return LowRankApprox(g, z.values.astype(np.float64).T @ g)
