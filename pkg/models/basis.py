from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from lagrange.exceptions import InvalidInputError
from schemas import SolverConfig


@dataclass(frozen=True)
class BasisMatrix:
    """
    Sparse n x |V_k| matrix, one column per known center, columns ordered by
    center index. Local columns store nothing outside their support; `dirichlet`
    records that the supports are Dirichlet-closed balls.
    """
    matrix: sp.csc_matrix
    centers: np.ndarray
    mode: Literal["lagrange", "local"]
    radii: Optional[np.ndarray] = None
    supports: Optional[Tuple[np.ndarray, ...]] = field(default=None, repr=False)
    solver: SolverConfig = field(default_factory=SolverConfig)
    graph_hash: Optional[str] = None
    dirichlet: bool = False

    def __post_init__(self):
        matrix = sp.csc_matrix(self.matrix)
        matrix.eliminate_zeros()
        matrix.sort_indices()
        centers = np.asarray(self.centers, dtype=np.int64)
        if matrix.shape[1] != centers.size:
            raise InvalidInputError(f"{matrix.shape[1]} columns for {centers.size} centers")
        if np.any(np.diff(centers) <= 0):
            raise InvalidInputError("Basis centers must be strictly increasing")
        if self.supports is not None and len(self.supports) != centers.size:
            raise InvalidInputError("One support set is required per center")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "centers", centers)
        if self.radii is not None:
            object.__setattr__(self, "radii", np.asarray(self.radii, dtype=float))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def column_count(self) -> int:
        return self.centers.size

    def column_index(self, v: int) -> int:
        i = int(np.searchsorted(self.centers, v))
        if i >= self.centers.size or self.centers[i] != v:
            raise InvalidInputError(f"Vertex {v} is not a center of this basis")
        return i

    def column(self, v: int) -> np.ndarray:
        return self.matrix[:, self.column_index(v)].toarray().ravel()

    def column_entries(self, v: int) -> Tuple[np.ndarray, np.ndarray]:
        i = self.column_index(v)
        start, stop = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return self.matrix.indices[start:stop].copy(), self.matrix.data[start:stop].copy()

    def support(self, v: int) -> np.ndarray:
        """Vertices where the column is allowed to be nonzero (all vertices for Lagrange)."""
        if self.supports is None:
            return np.arange(self.n)
        return self.supports[self.column_index(v)]

    def radius(self, v: int) -> Optional[float]:
        if self.radii is None:
            return None
        return float(self.radii[self.column_index(v)])

    def columns_by_center(self) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
        return {int(c): self.column_entries(int(c)) for c in self.centers}

    def common_radius(self) -> Optional[float]:
        """The outer radius shared by every column, None when radii differ or are absent."""
        if self.radii is None or self.radii.size == 0:
            return None
        radius = float(self.radii[0])
        return radius if np.all(self.radii == radius) else None

    def __repr__(self):
        return f"<BasisMatrix mode={self.mode} shape={self.matrix.shape} nnz={self.matrix.nnz}>"
