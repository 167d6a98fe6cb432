"""Dense linear-algebra primitives shared by every solver.

Matrices are plain float64 numpy arrays in column-major (Fortran) order so
that frame stacking is a contiguous copy; vectors are 1-d float64 arrays.
Constructors reject non-finite entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_matrix(a) -> np.ndarray:
    """Validate and return *a* as a column-major float64 matrix."""
    a = np.asfortranarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise ValueError(f"zero-size matrix of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def as_vector(y) -> np.ndarray:
    """Validate and return *y* as a 1-d float64 vector."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got ndim={y.ndim}")
    if y.size == 0:
        raise ValueError("zero-length vector")
    if not np.all(np.isfinite(y)):
        raise ValueError("vector entries must be finite (no NaN/Inf)")
    return y


@dataclass(frozen=True)
class TruncatedSvd:
    """Rank-r singular triplet bundle: u (m×r), sigma (r,), vt (r×n)."""

    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray

    @property
    def rank(self) -> int:
        return self.sigma.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Return u @ diag(sigma) @ vt."""
        return (self.u * self.sigma) @ self.vt


def least_squares_solve(a, y) -> np.ndarray:
    """Minimum-norm x minimizing ||y - A x||_2.

    Uses a rank-revealing SVD solve; directions with singular value below
    max(m, n) * eps * sigma_max are excluded, so rank-deficient systems get
    the Moore-Penrose (minimum-norm) solution.
    """
    a = as_matrix(a)
    y = as_vector(y)
    if a.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: A is {a.shape}, y has length {y.shape[0]}")
    x, _, _, _ = np.linalg.lstsq(a, y, rcond=None)
    return x


def truncated_svd(a, r: int) -> TruncatedSvd:
    """Best rank-r approximation factors of *a* (Eckart-Young)."""
    a = as_matrix(a)
    m, n = a.shape
    if not 1 <= r <= min(m, n):
        raise ValueError(f"rank r={r} out of range [1, {min(m, n)}] for shape {a.shape}")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return TruncatedSvd(u=np.asfortranarray(u[:, :r]), sigma=s[:r].copy(),
                        vt=np.asfortranarray(vt[:r]))


def soft_threshold(v, tau: float):
    """Proximal operator of tau * |.|: sign(v) * max(|v| - tau, 0).

    Elementwise on arrays; scalar in, scalar out.
    """
    if tau < 0:
        raise ValueError(f"threshold tau={tau} must be nonnegative")
    out = np.sign(v) * np.maximum(np.abs(v) - tau, 0.0) + 0.0  # +0.0 normalizes -0.0
    if np.isscalar(v):
        return float(out)
    return out
