"""
Dense complex linear algebra: SVD and truncated-SVD least squares.

Both Levin solvers funnel every linear solve through tsvd_solve.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.errors import ContractError, SolverError

logger = logging.getLogger("numkernel")

DEFAULT_EPS_REL = 1e-13


@dataclass(frozen=True)
class TsvdReport:
    """Diagnostics of one truncated-SVD solve."""

    rank_used: int
    sigma_max: float
    sigma_cutoff: float
    residual_norm: float


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ContractError(f"expected a nonempty 2D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError(f"matrix {A.shape[0]}x{A.shape[1]} has non-finite entries")
    return A


def svd(A) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Thin singular value decomposition A = U diag(sigma) V^H.

    Args:
        A: Finite matrix, promoted to complex

    Returns:
        U (rows x r), sigma (r,) nonincreasing, V (cols x r), r = min(rows, cols)

    Raises:
        SolverError: If LAPACK does not converge
    """
    A = _as_matrix(A)
    try:
        U, sigma, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as e:
        logger.error(f"SVD failed on {A.shape[0]}x{A.shape[1]} matrix: {e}")
        raise SolverError("SVD did not converge", A.shape) from e
    return U, sigma, Vh.conj().T


def tsvd_solve(A, b, eps_rel: float = DEFAULT_EPS_REL) -> Tuple[np.ndarray, TsvdReport]:
    """
    Minimal-norm least-squares solve over the retained singular subspace.

    Singular values sigma_j <= eps_rel * sigma_max are discarded.

    Args:
        A: Matrix (rows x cols)
        b: Right-hand side of length rows
        eps_rel: Relative truncation threshold in (0, 1)

    Returns:
        Solution vector of length cols and a TsvdReport
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=complex)
    if b.ndim != 1 or b.shape[0] != A.shape[0]:
        raise ContractError(f"right-hand side of shape {b.shape} does not match matrix {A.shape[0]}x{A.shape[1]}")
    if not 0.0 < eps_rel < 1.0:
        raise ContractError(f"eps_rel must lie in (0, 1), got {eps_rel}")

    U, sigma, V = svd(A)
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    if sigma_max == 0.0:
        x = np.zeros(A.shape[1], dtype=complex)
        return x, TsvdReport(0, 0.0, 0.0, float(np.linalg.norm(b)))

    cutoff = eps_rel * sigma_max
    keep = sigma > cutoff
    coeffs = (U[:, keep].conj().T @ b) / sigma[keep]
    x = V[:, keep] @ coeffs
    residual = float(np.linalg.norm(A @ x - b))
    return x, TsvdReport(int(np.count_nonzero(keep)), sigma_max, cutoff, residual)
