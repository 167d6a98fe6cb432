"""Robust regression by l1 outlier isolation.

Minimizes  f(x, b) = ||b||_1 + (lam/2) ||y - A x - b||_2^2  by block
coordinate descent: a least-squares update for the coefficients x followed
by an elementwise soft-threshold update for the outlier vector b.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, as_vector, least_squares_solve, soft_threshold


@dataclass(frozen=True)
class LoireConfig:
    """Solver settings.

    lam is the quadratic penalty weight (the shrinkage threshold is 1/lam).
    tol bounds ||b_{k+1} - b_k||_2 at convergence; None selects the default
    1e-10 * (1 + ||y||_2), tight enough that the lasso subgradient
    certificate holds to 1e-6 at the returned point.
    """

    lam: float
    tol: float | None = None
    max_iter: int = 1000

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam={self.lam} must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ValueError(f"tol={self.tol} must be positive")
        if self.max_iter < 1:
            raise ValueError(f"max_iter={self.max_iter} must be at least 1")


@dataclass
class LoireSolution:
    x: np.ndarray
    b: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def loire_objective(a, y, x, b, lam: float) -> float:
    """||b||_1 + (lam/2) ||y - A x - b||_2^2."""
    a = as_matrix(a)
    y = as_vector(y)
    x = as_vector(x) if np.ndim(x) else np.atleast_1d(np.float64(x))
    b = as_vector(b)
    if a.shape[0] != y.shape[0] or a.shape[1] != x.shape[0] or b.shape[0] != y.shape[0]:
        raise ValueError("inconsistent dimensions for objective evaluation")
    r = y - a @ x - b
    return float(np.sum(np.abs(b)) + 0.5 * lam * np.dot(r, r))


def default_lambda(a, y) -> float:
    """Heuristic penalty weight 1 / median(|y - A x_ls|), clamped to [1e-6, 1e6]."""
    a = as_matrix(a)
    y = as_vector(y)
    resid = np.abs(y - a @ least_squares_solve(a, y))
    med = float(np.median(resid))
    if med <= 1e-300:
        return 1e6
    return float(np.clip(1.0 / med, 1e-6, 1e6))


def loire_solve(a, y, cfg: LoireConfig) -> LoireSolution:
    """Run the alternating-descent solver from b_0 = 0.

    Each iteration applies x <- pinv(A)(y - b) and then
    b <- soft_threshold(y - A x, 1/lam).  Stops when ||b_{k+1} - b_k||_2
    drops to cfg.tol; hitting max_iter first returns converged=False.
    The pseudoinverse factors of A are computed once and reused.
    """
    a = as_matrix(a)
    y = as_vector(y)
    if a.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: A is {a.shape}, y has length {y.shape[0]}")
    tol = cfg.tol if cfg.tol is not None else 1e-10 * (1.0 + float(np.linalg.norm(y)))

    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = max(a.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    keep = s > cutoff
    ur, sr, vr = u[:, keep], s[keep], vt[keep]

    def pinv_apply(z):
        return vr.T @ ((ur.T @ z) / sr)

    m = y.shape[0]
    b = np.zeros(m)
    x = np.zeros(a.shape[1])
    trace: list[float] = []
    converged = False
    iterations = 0
    thresh = 1.0 / cfg.lam
    for _ in range(cfg.max_iter):
        x = pinv_apply(y - b)
        resid = y - a @ x
        b_new = soft_threshold(resid, thresh)
        trace.append(loire_objective(a, y, x, b_new, cfg.lam))
        delta = float(np.linalg.norm(b_new - b))
        b = b_new
        iterations += 1
        if delta <= tol:
            converged = True
            break
    return LoireSolution(x=x, b=b, objective_trace=trace,
                         iterations=iterations, converged=converged)
