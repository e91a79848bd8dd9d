"""
Numerical checks for the quantities that control the gap between Lagrange
and local Lagrange functions: the inf-norm bound for inverses of positive
definite matrices, the block structure of L around a neighborhood, and
empirical decay rates.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from lagrange.assumptions import neighbor_bounds
from lagrange.exceptions import InvalidInputError, NotPositiveDefiniteError
from models import Graph, Laplacian, Neighborhood, Partition
from schemas import InfNormBound, LemmaBounds

BOUND_SLACK = 1e-12


def check_inf_norm_bound(A) -> InfNormBound:
    """Compare ||A^-1||_inf with (sqrt(n) + 1) / (2 lambda_min) for an SPD matrix A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise InvalidInputError("Matrix is not symmetric")

    lambda_min = float(np.linalg.eigvalsh(A)[0])
    if lambda_min <= 0:
        raise NotPositiveDefiniteError(lambda_min)

    n = A.shape[0]
    lhs = float(np.linalg.norm(np.linalg.inv(A), ord=np.inf))
    rhs = (np.sqrt(n) + 1) / (2 * lambda_min)
    return InfNormBound(
        lhs=lhs,
        rhs=float(rhs),
        lambda_min=lambda_min,
        holds=lhs <= rhs * (1 + BOUND_SLACK) + BOUND_SLACK,
    )


def random_spd(n: int, rng: np.random.Generator, eps: float = 0.01) -> np.ndarray:
    """G^T G + eps I with standard normal G."""
    G = rng.standard_normal((n, n))
    return G.T @ G + eps * np.eye(n)


@dataclass(frozen=True)
class BlockPartition:
    """
    Rows/columns of L grouped as 1) unknown in Omega, 2) unknown outside,
    3) known in Omega, 4) known outside.
    """
    sets: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    dense: np.ndarray

    def block(self, a: int, b: int) -> np.ndarray:
        return self.dense[np.ix_(self.sets[a - 1], self.sets[b - 1])]


def block_partition(L: Laplacian, p: Partition, members: np.ndarray) -> BlockPartition:
    inside = np.zeros(p.n, dtype=bool)
    inside[members] = True
    known = p.known_mask
    sets = (
        np.flatnonzero(~known & inside),
        np.flatnonzero(~known & ~inside),
        np.flatnonzero(known & inside),
        np.flatnonzero(known & ~inside),
    )
    return BlockPartition(sets=sets, dense=L.dense())


def _local_gram(blocks: BlockPartition) -> np.ndarray:
    L11, L31 = blocks.block(1, 1), blocks.block(3, 1)
    return L11.T @ L11 + L31.T @ L31


def predicted_local_difference(L: Laplacian, p: Partition, nb: Neighborhood,
                               chi_full: np.ndarray) -> np.ndarray:
    """
    -(L11^T L11 + L31^T L31)^-1 L31^T L32 chi_{v,u}|outside, which equals
    chi_{v,u}|Omega - chi_bar_{v,u}|Omega when the boundary of Omega is known.
    Entries follow the order of the unknown vertices inside Omega.
    """
    blocks = block_partition(L, p, nb.members)
    if blocks.sets[0].size == 0:
        return np.empty(0)
    coupling = blocks.block(3, 1).T @ blocks.block(3, 2)
    return -np.linalg.solve(_local_gram(blocks), coupling @ np.asarray(chi_full)[blocks.sets[1]])


def lemma_bounds(L: Laplacian, p: Partition, nb: Neighborhood, g: Graph,
                 max_size: Optional[int] = None) -> LemmaBounds:
    """
    ||(L11^T L11 + L31^T L31)^-1||_inf against (sqrt(N_Omega) + 1) / 2 and
    ||L31^T L32||_inf against M_u M_k.
    """
    blocks = block_partition(L, p, nb.members)
    n_omega = max_size or nb.size
    _, m_u, m_k = neighbor_bounds(g, p)

    if blocks.sets[0].size:
        inverse_norm = float(np.linalg.norm(np.linalg.inv(_local_gram(blocks)), ord=np.inf))
        coupling = blocks.block(3, 1).T @ blocks.block(3, 2)
        coupling_norm = float(np.linalg.norm(coupling, ord=np.inf)) if coupling.size else 0.0
    else:
        inverse_norm = coupling_norm = 0.0

    inverse_bound = (np.sqrt(n_omega) + 1) / 2
    coupling_bound = float(m_u * m_k)
    return LemmaBounds(
        inverse_norm=inverse_norm,
        inverse_bound=float(inverse_bound),
        inverse_holds=inverse_norm <= inverse_bound + BOUND_SLACK,
        coupling_norm=coupling_norm,
        coupling_bound=coupling_bound,
        coupling_holds=coupling_norm <= coupling_bound + BOUND_SLACK,
    )


def decay_slope(radii: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against radius; errors are floored at machine epsilon."""
    radii = np.asarray(radii, dtype=float)
    errors = np.maximum(np.asarray(errors, dtype=float), np.finfo(float).eps)
    if radii.size < 2:
        raise InvalidInputError("At least two radii are needed to fit a slope")
    return float(np.polyfit(radii, np.log(errors), 1)[0])

