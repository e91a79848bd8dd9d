"""
Lagrange and local Lagrange bases.

A Lagrange column chi_v takes the value 1 at v and 0 on every other known
vertex; its unknown part solves min ||L_u f + L_k chi_{v,k}||. A local column
solves the same problem on the submatrix L_{Omega_v} and is zero outside
Omega_v. Known values are assigned, only unknown values come from a solver.
"""
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union
import time

from joblib import Parallel, delayed
import numpy as np
import scipy.sparse as sp

from lagrange.exceptions import (
    BasisComputationError,
    DimensionMismatchError,
    InvalidInputError,
    LagrangeError,
)
from lagrange.solvers import least_squares, resolve_method, solve_normal_equations
from models import BasisMatrix, Laplacian, Neighborhood, Partition
from schemas import Discrepancy, SolverConfig, SolverMethod
from utils.logging import get_logger, log_basis_computation

logger = get_logger(__name__)

ColumnEntries = Tuple[np.ndarray, np.ndarray]


def _require_known(p: Partition, v: int):
    if not 0 <= v < p.n or not p.is_known(v):
        raise InvalidInputError(f"Center {v} is not a known vertex")


def lagrange_column(L: Laplacian, p: Partition, v: int, cfg: Optional[SolverConfig] = None) -> np.ndarray:
    """Dense Lagrange function chi_v over all vertices."""
    cfg = cfg or SolverConfig()
    _require_known(p, v)
    chi = np.zeros(L.n)
    chi[v] = 1.0
    if p.unknown.size == 0:
        return chi

    columns = L.matrix.tocsc()
    L_u = columns[:, p.unknown]
    rhs = -columns[:, [v]].toarray().ravel()
    chi[p.unknown] = least_squares(L_u, rhs, cfg, resolve_method(cfg, p.unknown.size, global_problem=True))
    return chi


def local_column_entries(L: Laplacian, p: Partition, nb: Neighborhood,
                         cfg: Optional[SolverConfig] = None) -> ColumnEntries:
    """(rows, values) of the local Lagrange column, rows sorted, zeros dropped."""
    cfg = cfg or SolverConfig()
    v = nb.center
    _require_known(p, v)
    members = nb.members
    known_inside = p.known_mask[members]
    unknown_pos = np.flatnonzero(~known_inside)
    if unknown_pos.size == 0:
        return np.array([v], dtype=np.int64), np.array([1.0])

    block = L.matrix[members][:, members].tocsc()
    center_pos = int(np.searchsorted(members, v))
    rhs = -block[:, [center_pos]].toarray().ravel()
    values = least_squares(block[:, unknown_pos], rhs, cfg, resolve_method(cfg, unknown_pos.size))

    rows = np.concatenate([[v], members[unknown_pos]]).astype(np.int64)
    data = np.concatenate([[1.0], values])
    order = np.argsort(rows)
    rows, data = rows[order], data[order]
    nonzero = data != 0
    return rows[nonzero], data[nonzero]


def local_lagrange_column(L: Laplacian, p: Partition, nb: Neighborhood,
                          cfg: Optional[SolverConfig] = None) -> sp.csc_matrix:
    """Sparse (n, 1) local Lagrange function; structurally zero outside Omega_v."""
    rows, data = local_column_entries(L, p, nb, cfg)
    return sp.csc_matrix((data, (rows, np.zeros_like(rows))), shape=(L.n, 1))


def assemble_columns(n: int, columns: Sequence[ColumnEntries]) -> sp.csc_matrix:
    indptr = np.zeros(len(columns) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([rows.size for rows, _ in columns])
    indices = np.concatenate([rows for rows, _ in columns]) if columns else np.empty(0, dtype=np.int64)
    data = np.concatenate([vals for _, vals in columns]) if columns else np.empty(0)
    return sp.csc_matrix((data, indices, indptr), shape=(n, len(columns)))


def map_columns(func: Callable, items: Iterable, centers: Sequence[int], workers: int = 1) -> List[ColumnEntries]:
    """
    Apply `func` to every item, on joblib threads when workers > 1. Output order follows
    the input order; failures are collected per center and raised together.
    """
    failures: Dict[int, str] = {}

    def guarded(args):
        center, item = args
        try:
            return func(item)
        except (LagrangeError, np.linalg.LinAlgError) as e:
            failures[int(center)] = str(e)
            return None

    pairs = list(zip(centers, items))
    if workers > 1:
        results = Parallel(n_jobs=workers, prefer="threads")(delayed(guarded)(pair) for pair in pairs)
    else:
        results = [guarded(pair) for pair in pairs]

    if failures:
        raise BasisComputationError(failures)
    return results


def _global_columns(L: Laplacian, p: Partition, cfg: SolverConfig, workers: int) -> Tuple[List[ColumnEntries], SolverMethod]:
    method = resolve_method(cfg, p.unknown.size, global_problem=True)
    if p.unknown.size == 0:
        return [(np.array([v]), np.array([1.0])) for v in p.known], method

    if method == SolverMethod.DIRECT:
        columns = L.matrix.tocsc()
        L_u = columns[:, p.unknown]
        rhs = -(L_u.T @ columns[:, p.known]).toarray()
        solution = solve_normal_equations(L_u, rhs)

        result = []
        for c, v in enumerate(p.known):
            rows = np.concatenate([[v], p.unknown])
            data = np.concatenate([[1.0], solution[:, c]])
            order = np.argsort(rows)
            rows, data = rows[order], data[order]
            keep = data != 0
            result.append((rows[keep], data[keep]))
        return result, method

    def solve_one(v):
        chi = lagrange_column(L, p, int(v), cfg)
        rows = np.flatnonzero(chi)
        return rows, chi[rows]

    return map_columns(solve_one, p.known, p.known, workers), method


def compute_basis(L: Laplacian, p: Partition, nbhds: Union[str, Sequence[Neighborhood], None] = "global",
                  cfg: Optional[SolverConfig] = None, workers: int = 1,
                  graph_hash: Optional[str] = None) -> BasisMatrix:
    """
    Compute one column per known center. `nbhds="global"` (or None) gives the
    Lagrange basis, a neighborhood list (one per known center, in center order)
    gives the local Lagrange basis.
    """
    cfg = cfg or SolverConfig()
    if L.n != p.n:
        raise DimensionMismatchError(f"Laplacian has {L.n} vertices, partition {p.n}")
    start_time = time.time()

    if nbhds is None or (isinstance(nbhds, str) and nbhds == "global"):
        columns, method = _global_columns(L, p, cfg, workers)
        basis = BasisMatrix(
            matrix=assemble_columns(L.n, columns),
            centers=p.known,
            mode="lagrange",
            solver=cfg,
            graph_hash=graph_hash,
        )
    else:
        nbhds = list(nbhds)
        centers = np.array([nb.center for nb in nbhds], dtype=np.int64)
        if not np.array_equal(centers, p.known):
            raise InvalidInputError("Exactly one neighborhood per known vertex is required, in center order")
        closed = {nb.dirichlet for nb in nbhds}
        if len(closed) > 1:
            raise InvalidInputError("Neighborhoods mix plain and Dirichlet-closed balls")
        columns = map_columns(lambda nb: local_column_entries(L, p, nb, cfg), nbhds, centers, workers)
        method = resolve_method(cfg, 0)
        basis = BasisMatrix(
            matrix=assemble_columns(L.n, columns),
            centers=centers,
            mode="local",
            radii=np.array([nb.radius for nb in nbhds]),
            supports=tuple(nb.members for nb in nbhds),
            solver=cfg,
            graph_hash=graph_hash,
            dirichlet=closed == {True},
        )

    log_basis_computation(logger, basis.mode, basis.column_count, basis.matrix.nnz,
                          time.time() - start_time, method.value)
    return basis


def normal_equation_residual(L: Laplacian, p: Partition, chi: np.ndarray) -> float:
    """||L_u^T (L_u chi_u + L_k chi_k)||_inf for a full column chi."""
    if p.unknown.size == 0:
        return 0.0
    r = L.matrix @ chi
    return float(np.abs(L.matrix.tocsc()[:, p.unknown].T @ r).max())


def basis_discrepancy(full: BasisMatrix, local: BasisMatrix, v: int) -> Discrepancy:
    """
    inside = ||(local - full)|_Omega_v||_inf, outside = ||full|_complement||_inf,
    with Omega_v the support of the local column.
    """
    if full.matrix.shape[0] != local.matrix.shape[0]:
        raise DimensionMismatchError(f"Bases have {full.n} and {local.n} rows")
    chi = full.column(v)
    chi_bar = local.column(v)
    inside_mask = np.zeros(full.n, dtype=bool)
    inside_mask[local.support(v)] = True

    inside = float(np.abs(chi_bar - chi)[inside_mask].max())
    outside = float(np.abs(chi[~inside_mask]).max()) if np.any(~inside_mask) else 0.0
    return Discrepancy(center=int(v), inside=inside, outside=outside)


def sparsity_ratio(b: BasisMatrix, threshold: float = 0.0) -> float:
    """Fraction of the n x |V_k| entries whose magnitude exceeds `threshold`."""
    if threshold < 0:
        raise InvalidInputError("Sparsity threshold must be nonnegative")
    total = b.n * b.column_count
    if total == 0:
        return 0.0
    if threshold == 0:
        return b.matrix.nnz / total
    return int(np.count_nonzero(np.abs(b.matrix.data) > threshold)) / total
