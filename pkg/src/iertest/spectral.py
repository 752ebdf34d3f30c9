"""Operator (spectral) norm of symmetric real matrices.

Two paths: a full symmetric eigendecomposition for small matrices, and
a Lanczos iteration with full reorthogonalization for large ones.  Both
return max |eigenvalue|.  Inputs are sign-canonicalized first so that
operator_norm(-M) == operator_norm(M) holds bit-exactly on either path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NoConvergence
from .rng import RngStream

# Start-vector stream used when the caller does not supply one.
_DEFAULT_STREAM = RngStream(0x1A2C205)


@dataclass(frozen=True)
class SpectralConfig:
    """Knobs for the operator-norm computation.

    exact_cutoff: largest n still handled by dense eigendecomposition.
    tol: relative tolerance of the iterative estimate.
    max_iter: Lanczos step budget; None means 10 n + 1000.
    """

    exact_cutoff: int = 256
    tol: float = 1e-10
    max_iter: int | None = None

    def __post_init__(self):
        if self.exact_cutoff < 1:
            raise ValueError("exact_cutoff must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def iteration_budget(self, n: int) -> int:
        return self.max_iter if self.max_iter is not None else 10 * n + 1000


def _as_symmetric(M) -> np.ndarray:
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"operator norm needs a square matrix, got {arr.shape}")
    return arr


def _canonical_sign(arr: np.ndarray) -> np.ndarray:
    # Flip the sign when the first nonzero entry (row-major) is negative,
    # so M and -M go through the identical floating-point computation.
    # Adding 0.0 turns the -0.0 produced by negation back into +0.0.
    flat = arr.ravel()
    nz = np.flatnonzero(flat)
    if nz.size and flat[nz[0]] < 0:
        return -arr + 0.0
    return arr + 0.0


def operator_norm_exact(M) -> float:
    """max |eigenvalue| via full symmetric eigendecomposition."""
    arr = _canonical_sign(_as_symmetric(M))
    try:
        eigs = np.linalg.eigvalsh(arr)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc
    return float(np.abs(eigs).max())


def operator_norm_iterative(
    M, cfg: SpectralConfig | None = None, rng: RngStream | None = None
) -> float:
    """max |eigenvalue| via Lanczos with full reorthogonalization.

    The start vector is drawn from ``rng`` so results are reproducible.
    Converges when the Ritz estimate stalls for two consecutive steps at
    relative tolerance cfg.tol, on Krylov-space breakdown, or after n
    steps (exact at that point).  Raises NoConvergence, carrying the
    best estimate, only when a max_iter below n cuts the run short.
    """
    cfg = cfg or SpectralConfig()
    rng = rng or _DEFAULT_STREAM
    arr = _canonical_sign(_as_symmetric(M))
    n = arr.shape[0]
    scale = float(np.abs(arr).max())
    if scale == 0.0:
        return 0.0
    if n == 1:
        return float(abs(arr[0, 0]))

    gen = rng.generator()
    q = gen.standard_normal(n)
    q /= np.linalg.norm(q)

    budget = min(cfg.iteration_budget(n), n)
    basis = np.empty((n, budget))
    alphas: list[float] = []
    betas: list[float] = []
    breakdown_tol = 1e-14 * n * scale

    basis[:, 0] = q
    estimate = 0.0
    stall = 0
    for k in range(budget):
        u = arr @ basis[:, k]
        alpha = float(basis[:, k] @ u)
        alphas.append(alpha)
        u -= alpha * basis[:, k]
        if k > 0:
            u -= betas[-1] * basis[:, k - 1]
        # Full reorthogonalization, two passes, keeps the Ritz values trustworthy.
        u -= basis[:, : k + 1] @ (basis[:, : k + 1].T @ u)
        u -= basis[:, : k + 1] @ (basis[:, : k + 1].T @ u)

        tri = np.diag(alphas)
        if betas:
            off = np.array(betas)
            tri += np.diag(off, 1) + np.diag(off, -1)
        ritz = np.linalg.eigvalsh(tri)
        new_estimate = float(np.abs(ritz).max())

        if k > 0 and abs(new_estimate - estimate) <= cfg.tol * max(new_estimate, 1e-300):
            stall += 1
        else:
            stall = 0
        estimate = new_estimate
        if stall >= 2:
            return estimate

        beta = float(np.linalg.norm(u))
        if beta <= breakdown_tol:
            # Invariant subspace reached: the tridiagonal is exact.
            return estimate
        if k + 1 < budget:
            betas.append(beta)
            basis[:, k + 1] = u / beta

    if budget >= n:
        return estimate
    raise NoConvergence(estimate, budget)


def operator_norm(
    M, cfg: SpectralConfig | None = None, rng: RngStream | None = None
) -> float:
    """Dispatch: exact path for n <= cfg.exact_cutoff, iterative above."""
    cfg = cfg or SpectralConfig()
    arr = _as_symmetric(M)
    if arr.shape[0] <= cfg.exact_cutoff:
        return operator_norm_exact(arr)
    return operator_norm_iterative(arr, cfg, rng)
