from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional
import hashlib

import numpy as np
import scipy.sparse as sp

from schemas import Metric


@dataclass(frozen=True)
class Graph:
    """
    Undirected weighted graph. Each edge (i, j) is stored once with i < j;
    the weight of an edge is the reciprocal of its length.
    """
    n: int
    rows: np.ndarray
    cols: np.ndarray
    lengths: np.ndarray
    theta: float
    metric: Metric = field(default_factory=Metric)
    scale: float = 1.0  # parameter-space distances are divided by this
    points: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    ids: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def edge_count(self) -> int:
        return len(self.lengths)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / self.lengths

    @property
    def rho_max(self) -> float:
        return float(self.lengths.max()) if self.edge_count else 0.0

    @property
    def rho_min(self) -> float:
        return float(self.lengths.min()) if self.edge_count else 0.0

    def edges(self):
        return [(int(i), int(j), float(r)) for i, j, r in zip(self.rows, self.cols, self.lengths)]

    def _symmetric(self, values: np.ndarray) -> sp.csr_matrix:
        rows = np.concatenate([self.rows, self.cols])
        cols = np.concatenate([self.cols, self.rows])
        data = np.concatenate([values, values])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        return self._symmetric(self.weights)

    @cached_property
    def length_matrix(self) -> sp.csr_matrix:
        return self._symmetric(self.lengths)

    @cached_property
    def neighbor_counts(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.neighbor_counts.max()) if self.n else 0

    def neighbors(self, v: int) -> np.ndarray:
        adj = self.adjacency
        return adj.indices[adj.indptr[v]:adj.indptr[v + 1]]

    def graph_hash(self) -> str:
        """sha256 over n and the edge arrays in (i, j) order; independent of storage order."""
        order = np.lexsort((self.cols, self.rows))
        digest = hashlib.sha256()
        digest.update(np.int64(self.n).tobytes())
        digest.update(np.ascontiguousarray(self.rows[order], dtype=np.int64).tobytes())
        digest.update(np.ascontiguousarray(self.cols[order], dtype=np.int64).tobytes())
        digest.update(np.ascontiguousarray(self.lengths[order], dtype=np.float64).tobytes())
        return digest.hexdigest()

    def __repr__(self):
        return f"<Graph n={self.n} edges={self.edge_count} theta={self.theta:.4g} rho_max={self.rho_max:.4g}>"


@dataclass(frozen=True)
class Laplacian:
    """Normalized Laplacian D^(-1/2) (D - A) D^(-1/2) with the row sums of A."""
    matrix: sp.csr_matrix
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def __repr__(self):
        return f"<Laplacian n={self.n} nnz={self.matrix.nnz}>"
