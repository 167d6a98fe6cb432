"""Robust rank factorization Y ~ A X + B.

Alternates a truncated-SVD update for the unit-column dictionary A and the
coefficients X with an elementwise shrinkage update for the sparse
corruption B, minimizing  ||B||_1 + (lam/2) ||Y - A X - B||_F^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_matrix, soft_threshold, truncated_svd


@dataclass(frozen=True)
class FactorizationConfig:
    """Target rank, penalty weight, and stopping rule.

    tol bounds ||B_{k+1} - B_k||_F at convergence; None selects the default
    1e-7 * (1 + ||Y||_F).
    """

    rank: int
    lam: float
    tol: float | None = None
    max_iter: int = 500

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank={self.rank} must be at least 1")
        if self.lam <= 0:
            raise ValueError(f"lam={self.lam} must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ValueError(f"tol={self.tol} must be positive")
        if self.max_iter < 1:
            raise ValueError(f"max_iter={self.max_iter} must be at least 1")


@dataclass
class FactorizationSolution:
    a: np.ndarray
    x: np.ndarray
    b: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    def low_rank(self) -> np.ndarray:
        """The recovered low-rank component A X."""
        return self.a @ self.x


def rrf_objective(y, a, x, b, lam: float) -> float:
    """||B||_1 (entrywise) + (lam/2) ||Y - A X - B||_F^2."""
    y = as_matrix(y)
    a = as_matrix(a)
    x = as_matrix(x)
    b = as_matrix(b)
    if a.shape[0] != y.shape[0] or x.shape[1] != y.shape[1] \
            or a.shape[1] != x.shape[0] or b.shape != y.shape:
        raise ValueError("inconsistent dimensions for objective evaluation")
    r = y - a @ x - b
    return float(np.sum(np.abs(b)) + 0.5 * lam * np.sum(r * r))


def default_matrix_lambda(y, multiplier: float = 1.0) -> float:
    """Heuristic penalty weight sqrt(max(m, n)) / ||Y||_F, times *multiplier*."""
    y = as_matrix(y)
    fro = float(np.linalg.norm(y))
    if fro <= 1e-300:
        return 1e6 * multiplier
    return multiplier * math.sqrt(max(y.shape)) / fro


def rrf_solve(y, cfg: FactorizationConfig) -> FactorizationSolution:
    """Alternating descent from B_0 = 0.

    Each iteration takes the best rank-r factors of Y - B via SVD
    (A = leading left singular vectors, X = sigma * Vt rows) and then
    shrinks the residual:  B <- soft_threshold(Y - A X, 1/lam).
    Stops when ||B_{k+1} - B_k||_F drops to cfg.tol.
    """
    y = as_matrix(y)
    m, n = y.shape
    if cfg.rank > min(m, n):
        raise ValueError(f"rank={cfg.rank} out of range [1, {min(m, n)}] for shape {y.shape}")
    tol = cfg.tol if cfg.tol is not None else 1e-7 * (1.0 + float(np.linalg.norm(y)))

    b = np.zeros((m, n))
    trace: list[float] = []
    converged = False
    iterations = 0
    thresh = 1.0 / cfg.lam
    a_fac = np.zeros((m, cfg.rank))
    x_fac = np.zeros((cfg.rank, n))
    for _ in range(cfg.max_iter):
        svd = truncated_svd(y - b, cfg.rank)
        a_fac = svd.u
        x_fac = svd.sigma[:, None] * svd.vt
        b_new = soft_threshold(y - a_fac @ x_fac, thresh)
        trace.append(rrf_objective(y, a_fac, x_fac, b_new, cfg.lam))
        delta = float(np.linalg.norm(b_new - b))
        b = b_new
        iterations += 1
        if delta <= tol:
            converged = True
            break
    return FactorizationSolution(a=a_fac, x=x_fac, b=b, objective_trace=trace,
                                 iterations=iterations, converged=converged)
