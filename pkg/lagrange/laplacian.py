import numpy as np
import scipy.sparse as sp

from lagrange.exceptions import IsolatedVertexError
from models import Graph, Laplacian


def normalized_laplacian(g: Graph) -> Laplacian:
    """
    L = D^(-1/2) (D - A) D^(-1/2). The diagonal is set to exactly 1 and the
    off-diagonal entry (i, j) is -w_ij / sqrt(d_i d_j).
    """
    adjacency = g.adjacency.tocoo()
    degrees = np.asarray(g.adjacency.sum(axis=1)).ravel()
    isolated = np.flatnonzero(degrees <= 0)
    if isolated.size:
        raise IsolatedVertexError(f"Vertices without edges: {isolated[:10].tolist()}")

    off_diagonal = -adjacency.data / np.sqrt(degrees[adjacency.row] * degrees[adjacency.col])
    np.clip(off_diagonal, -1.0, 0.0, out=off_diagonal)

    diagonal = np.arange(g.n)
    matrix = sp.csr_matrix(
        (
            np.concatenate([off_diagonal, np.ones(g.n)]),
            (np.concatenate([adjacency.row, diagonal]), np.concatenate([adjacency.col, diagonal])),
        ),
        shape=(g.n, g.n),
    )
    matrix.sort_indices()
    return Laplacian(matrix=matrix, degrees=degrees)
