"""Synthetic corruption benchmark: generators, detection metrics, baselines.

Instances follow the square-matrix protocol: a low-rank part L = P P^T with
P an n x r uniform(0,1) factor, dense uniform noise G, and sparse positive
spikes B.  All randomness flows through numpy's default_rng (PCG64) seeded
from the spec, so instances are bit-reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, as_vector, least_squares_solve, soft_threshold


@dataclass(frozen=True)
class SimSpec:
    """Generator parameters; the seed fully determines the instance."""

    n: int
    rank_frac: float = 0.05
    dense_noise_scale: float = 2.0
    spike_amplitude: float = 10.0
    spike_density: float = 0.05
    seed: int = 0
    gaussian_noise: bool = False  # sensitivity switch: true Gaussian instead of uniform

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n={self.n} must be positive")
        if not 0 < self.rank_frac <= 1:
            raise ValueError(f"rank_frac={self.rank_frac} must lie in (0, 1]")
        if not 0 <= self.spike_density <= 1:
            raise ValueError(f"spike_density={self.spike_density} must lie in [0, 1]")

    @property
    def rank(self) -> int:
        return max(1, math.ceil(self.rank_frac * self.n))


@dataclass
class SimInstance:
    """Observed matrix and its ground-truth components (y = l + g + b_true)."""

    y: np.ndarray
    l: np.ndarray
    g: np.ndarray
    b_true: np.ndarray
    true_support: set


def generate_sim(spec: SimSpec) -> SimInstance:
    """Draw one instance; deterministic for a fixed spec."""
    rng = np.random.default_rng(spec.seed)
    n, r = spec.n, spec.rank
    p = rng.uniform(0.0, 1.0, size=(n, r))
    l = p @ p.T
    if spec.gaussian_noise:
        g = rng.normal(0.0, spec.dense_noise_scale / 2.0, size=(n, n))
    else:
        g = rng.uniform(0.0, spec.dense_noise_scale, size=(n, n))
    mask = rng.random(size=(n, n)) < spec.spike_density
    b_true = np.where(mask, spec.spike_amplitude * rng.uniform(0.0, 1.0, size=(n, n)), 0.0)
    support = {(int(i), int(j)) for i, j in zip(*np.nonzero(mask))}
    return SimInstance(y=l + g + b_true, l=l, g=g, b_true=b_true, true_support=support)


@dataclass(frozen=True)
class DetectionMetrics:
    tp: int
    fn: int
    fp: int
    dr: float
    pre: float
    f: float


def compute_metrics(detected: set, truth: set, universe: int) -> DetectionMetrics:
    """Detection rate, precision, and F-measure over corrupted-entry detection.

    Empty-denominator conventions: DR = 1 when there is nothing to find,
    Pre = 1 when nothing was claimed, F = 0 when DR + Pre = 0.
    """
    detected = set(detected)
    truth = set(truth)
    tp = len(detected & truth)
    fn = len(truth - detected)
    fp = len(detected - truth)
    dr = tp / (tp + fn) if tp + fn > 0 else 1.0
    pre = tp / (tp + fp) if tp + fp > 0 else 1.0
    f = 2.0 * dr * pre / (dr + pre) if dr + pre > 0 else 0.0
    return DetectionMetrics(tp=tp, fn=fn, fp=fp, dr=dr, pre=pre, f=f)


def detect_matrix_support(b, zero_tol: float) -> set:
    """Positions (i, j) with |B_ij| > zero_tol."""
    b = as_matrix(b)
    ii, jj = np.nonzero(np.abs(b) > zero_tol)
    return {(int(i), int(j)) for i, j in zip(ii, jj)}


def baseline_ols(a, y) -> np.ndarray:
    """Non-robust least-squares reference."""
    return least_squares_solve(a, y)


@dataclass
class LadSolution:
    x: np.ndarray
    iterations: int
    converged: bool


def baseline_lad(a, y, rho: float = 1.0, tol: float = 1e-10,
                 max_iter: int = 5000) -> LadSolution:
    """Least-absolute-deviations fit min_x ||y - A x||_1 by ADMM splitting.

    Splits z = y - A x; the x-update is a least-squares solve against the
    cached pseudoinverse, the z-update a soft threshold with 1/rho.
    Non-convergence is flagged on the result, not raised.
    """
    a = as_matrix(a)
    y = as_vector(y)
    if a.shape[0] != y.shape[0]:
        raise ValueError(f"dimension mismatch: A is {a.shape}, y has length {y.shape[0]}")
    u_f, s_f, vt_f = np.linalg.svd(a, full_matrices=False)
    cutoff = max(a.shape) * np.finfo(np.float64).eps * (s_f[0] if s_f.size else 0.0)
    keep = s_f > cutoff
    ur, sr, vr = u_f[:, keep], s_f[keep], vt_f[keep]

    m = y.shape[0]
    x = np.zeros(a.shape[1])
    z = np.zeros(m)
    u = np.zeros(m)
    converged = False
    iterations = 0
    for _ in range(max_iter):
        x = vr.T @ ((ur.T @ (y - z + u)) / sr)
        ax = a @ x
        z_new = soft_threshold(y - ax + u, 1.0 / rho)
        r_primal = y - ax - z_new
        s_dual = rho * (z_new - z)
        z = z_new
        u = u + r_primal
        iterations += 1
        if np.linalg.norm(r_primal) <= tol * (1 + np.linalg.norm(y)) \
                and np.linalg.norm(s_dual) <= tol * (1 + np.linalg.norm(y)):
            converged = True
            break
    return LadSolution(x=x, iterations=iterations, converged=converged)


REPORT_COLUMNS = ("method", "N", "seed", "lambda", "tol", "iterations",
                  "DR", "Pre", "F", "wall_time_s")


@dataclass
class BenchmarkReport:
    """One benchmark run; serializes losslessly to the report.csv row schema."""

    method: str
    spec: SimSpec
    metrics: DetectionMetrics
    wall_time_s: float
    lam: float
    tol: float
    iterations: int

    def to_row(self) -> dict:
        return {
            "method": self.method,
            "N": str(self.spec.n),
            "seed": str(self.spec.seed),
            "lambda": repr(self.lam),
            "tol": repr(self.tol),
            "iterations": str(self.iterations),
            "DR": repr(self.metrics.dr),
            "Pre": repr(self.metrics.pre),
            "F": repr(self.metrics.f),
            "wall_time_s": repr(self.wall_time_s),
        }

    @classmethod
    def from_row(cls, row: dict) -> "BenchmarkReport":
        """Rebuild from a report.csv row; generator fields beyond (N, seed)
        are not part of the row schema and come back as SimSpec defaults."""
        tp = fn = fp = 0  # counts are not serialized; rates are
        return cls(
            method=row["method"],
            spec=SimSpec(n=int(row["N"]), seed=int(row["seed"])),
            metrics=DetectionMetrics(tp=tp, fn=fn, fp=fp, dr=float(row["DR"]),
                                     pre=float(row["Pre"]), f=float(row["F"])),
            wall_time_s=float(row["wall_time_s"]),
            lam=float(row["lambda"]),
            tol=float(row["tol"]),
            iterations=int(row["iterations"]),
        )
