"""
Least-squares backends for min ||A x - b||: a direct solve of the normal
equations (dense Cholesky for small systems, sparse LU otherwise) and LSQR.
"""
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lsqr, splu

from config import settings
from lagrange.exceptions import SolverConvergenceError
from schemas import SolverConfig, SolverMethod
from utils.logging import get_logger

logger = get_logger(__name__)


def resolve_method(cfg: SolverConfig, unknowns: int, global_problem: bool = False) -> SolverMethod:
    """Explicit methods win; otherwise direct unless a global system is too large."""
    if cfg.method is not None:
        return SolverMethod(cfg.method)
    if global_problem and unknowns > settings.global_direct_limit:
        return SolverMethod.LSQR
    return SolverMethod.DIRECT


def solve_normal_equations(A: sp.spmatrix, rhs: np.ndarray) -> np.ndarray:
    """
    Solve (A^T A) X = rhs where rhs already holds A^T B. A must have full
    column rank, which holds for L_u whenever at least one vertex is known.
    """
    normal = (A.T @ A).tocsc()
    rhs = np.asarray(rhs, dtype=float)
    try:
        if normal.shape[0] <= settings.dense_solve_limit:
            factor = scipy.linalg.cho_factor(normal.toarray(), lower=True, check_finite=False)
            return scipy.linalg.cho_solve(factor, rhs, check_finite=False)
        return splu(normal).solve(rhs)
    except (np.linalg.LinAlgError, RuntimeError) as e:
        raise SolverConvergenceError(f"Normal equations are singular: {e}", residual=float("nan"))


def solve_lsqr(A: sp.spmatrix, b: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    limit = cfg.iteration_limit(A.shape[1])
    result = lsqr(A, b, atol=cfg.tolerance, btol=cfg.tolerance, iter_lim=limit)
    x, istop, itn = result[0], result[1], result[2]

    normal_residual = float(np.abs(A.T @ (A @ x - b)).max()) if A.shape[1] else 0.0
    # 3 and 6: condition estimate above conlim, 7: iteration limit
    if istop in (3, 6, 7):
        raise SolverConvergenceError(
            f"LSQR stopped without convergence (istop={istop})",
            residual=normal_residual,
            iterations=itn,
        )
    logger.debug(f"LSQR converged in {itn} iterations, normal residual {normal_residual:.3e}")
    return x


def least_squares(A: sp.spmatrix, b: np.ndarray, cfg: SolverConfig,
                  method: Optional[SolverMethod] = None) -> np.ndarray:
    """min ||A x - b|| for a single right-hand side."""
    method = method or resolve_method(cfg, A.shape[1])
    b = np.asarray(b, dtype=float).ravel()
    if method == SolverMethod.LSQR:
        return solve_lsqr(A, b, cfg)
    return solve_normal_equations(A, A.T @ b)
