"""Dense symmetric-matrix helpers: validation, eigen-decomposition, numerical rank."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels


def sym_matrix(a, tol: float = 1e-12) -> np.ndarray:
    """Return ``a`` as a float array, exactly symmetric.

    Raises ``ValueError`` when ``a`` is not square or its asymmetry exceeds
    ``tol`` times ``1 + max|a|``.
    """
    M = np.array(a, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    scale = 1.0 + (float(np.abs(M).max()) if M.size else 0.0)
    if M.size and float(np.abs(M - M.T).max()) > tol * scale:
        raise ValueError("matrix is not symmetric")
    return (M + M.T) * 0.5


def inner(A: np.ndarray, B: np.ndarray) -> float:
    """Trace inner product ``A . B``."""
    return float(np.sum(A * B))


def sym_eigen(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors (columns) by Jacobi."""
    w, V = kernels.jacobi_eigh(np.ascontiguousarray(M, dtype=float))
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass(frozen=True)
class RankReport:
    rank: int
    eigenvalues: tuple[float, ...]
    gap_ratio: float
    ambiguous: bool

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "eigenvalues": list(self.eigenvalues),
            "gap_ratio": self.gap_ratio if math.isfinite(self.gap_ratio) else "inf",
            "ambiguous": self.ambiguous,
        }


AMBIGUOUS_GAP = 100.0


def numerical_rank(M, rel_tol: float = 1e-6) -> RankReport:
    """Count eigenvalues above ``rel_tol * lambda_max``.

    ``gap_ratio`` is the smallest kept eigenvalue over the largest dropped
    magnitude (infinite when nothing is dropped or nothing is kept).  A ratio
    below 100, or a negative eigenvalue below ``-rel_tol * lambda_max``, marks
    the report ambiguous.
    """
    w, _ = sym_eigen(M)
    top = max(float(w[0]) if w.size else 0.0, 1e-300)
    cut = rel_tol * top
    kept = w[w > cut]
    dropped = w[w <= cut]
    rank = int(kept.size)
    if kept.size and dropped.size:
        gap = float(kept[-1]) / max(float(np.abs(dropped).max()), 1e-300)
    else:
        gap = math.inf
    negative = bool(w.size and w[-1] < -cut)
    return RankReport(rank, tuple(float(x) for x in w), gap, gap < AMBIGUOUS_GAP or negative)
