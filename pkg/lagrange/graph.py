"""
Graph construction from point clouds: parameter-space distances, inner-radius
edges with weight 1/length, connectivity checks and unit-neighbor rescaling.
"""
from dataclasses import replace
from typing import Iterable, Optional, Tuple
import time

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import minkowski, pdist

from lagrange.exceptions import (
    DimensionMismatchError,
    DisconnectedGraphError,
    DuplicatePointError,
    InvalidInputError,
)
from models import Graph, PointCloud
from schemas import Metric, MetricKind
from utils.logging import get_logger, log_graph_build

logger = get_logger(__name__)


def metric_weights(metric: Metric, dim: int) -> Optional[np.ndarray]:
    """Per-feature weights of the metric, or None for the unweighted case."""
    if metric.kind == MetricKind.EUCLIDEAN or metric.weights is None:
        return None
    weights = np.asarray(metric.weights, dtype=float)
    if weights.size != dim:
        raise DimensionMismatchError(f"Metric has {weights.size} weights for {dim} features")
    return weights


def distance(x, y, metric: Metric) -> float:
    """
    (sum_i w_i |x_i - y_i|^p)^(1/p); plain Euclidean distance when the metric is euclidean.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"Cannot compare vectors of shapes {x.shape} and {y.shape}")
    if metric.p < 1:
        raise InvalidInputError(f"Minkowski order p must be >= 1, got {metric.p}")
    return float(minkowski(x, y, p=metric.p, w=metric_weights(metric, x.size)))


def distances_to(points: np.ndarray, x, metric: Metric) -> np.ndarray:
    """Distances from one feature vector to every row of `points`."""
    points = np.asarray(points, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    if points.shape[1] != x.size:
        raise DimensionMismatchError(f"Point has {x.size} features, graph points have {points.shape[1]}")
    diff = np.abs(points - x)
    weights = metric_weights(metric, x.size)
    if weights is None:
        weights = np.ones(x.size)
    return (diff ** metric.p @ weights) ** (1.0 / metric.p)


def pairwise_distances(points: np.ndarray, metric: Metric) -> np.ndarray:
    """Condensed pairwise distance vector in np.triu_indices(n, 1) order."""
    weights = metric_weights(metric, points.shape[1])
    if weights is None:
        return pdist(points, "minkowski", p=metric.p)
    return pdist(points, "minkowski", p=metric.p, w=weights)


def component_sizes(g: Graph) -> np.ndarray:
    count, labels = connected_components(g.adjacency, directed=False)
    return np.bincount(labels, minlength=count)


def ensure_connected(g: Graph) -> Graph:
    sizes = component_sizes(g)
    if sizes.size > 1:
        raise DisconnectedGraphError(sizes.tolist())
    return g


def build_graph(pc: PointCloud, m: Metric, inner_radius: float, scale: float = 1.0) -> Graph:
    """
    Join every pair of points whose distance is strictly less than
    `inner_radius`. Distances equal to the radius do not produce an edge.
    """
    if inner_radius <= 0:
        raise InvalidInputError(f"Inner radius must be positive, got {inner_radius}")
    if pc.n < 2:
        raise InvalidInputError("A graph needs at least two vertices")
    start_time = time.time()

    dists = pairwise_distances(pc.points, m) / scale
    theta = float(dists.min())
    if theta <= 0:
        raise DuplicatePointError("Point cloud contains coincident points under this metric")

    rows, cols = np.triu_indices(pc.n, 1)
    keep = dists < inner_radius
    g = Graph(
        n=pc.n,
        rows=rows[keep].astype(np.int64),
        cols=cols[keep].astype(np.int64),
        lengths=dists[keep],
        theta=theta,
        metric=m,
        scale=scale,
        points=pc.points,
        ids=pc.ids,
    )
    ensure_connected(g)

    log_graph_build(logger, g.n, g.edge_count, g.theta, g.rho_max, time.time() - start_time)
    return g


def graph_from_edges(n: int, edges: Iterable[Tuple[int, int, float]], theta: Optional[float] = None,
                     points: Optional[np.ndarray] = None, metric: Optional[Metric] = None,
                     scale: float = 1.0, require_connected: bool = True) -> Graph:
    """
    Build a graph from an explicit edge list. theta defaults to the shortest
    edge when no coordinates are available.
    """
    if n < 2:
        raise InvalidInputError("A graph needs at least two vertices")
    edge_array = np.asarray(list(edges), dtype=float).reshape(-1, 3)
    i = edge_array[:, 0].astype(np.int64)
    j = edge_array[:, 1].astype(np.int64)
    lengths = edge_array[:, 2]
    if np.any(lengths <= 0):
        raise InvalidInputError("Edge lengths must be strictly positive")
    if np.any(i == j):
        raise InvalidInputError("Self loops are not allowed")
    if np.any((i < 0) | (j < 0) | (i >= n) | (j >= n)):
        raise InvalidInputError("Edge endpoint out of range")

    rows, cols = np.minimum(i, j), np.maximum(i, j)
    order = np.lexsort((cols, rows))
    rows, cols, lengths = rows[order], cols[order], lengths[order]
    if np.any((np.diff(rows) == 0) & (np.diff(cols) == 0)):
        raise InvalidInputError("Duplicate edges in edge list")

    if theta is None:
        theta = float(lengths.min()) if lengths.size else 0.0
    g = Graph(
        n=n, rows=rows, cols=cols, lengths=lengths, theta=theta,
        metric=metric or Metric(), scale=scale, points=points,
    )
    if require_connected:
        ensure_connected(g)
    return g


def nearest_incident_lengths(g: Graph) -> np.ndarray:
    """Shortest incident edge length per vertex."""
    lm = g.length_matrix
    if np.any(np.diff(lm.indptr) == 0):
        raise DisconnectedGraphError(component_sizes(g).tolist())
    return np.minimum.reduceat(lm.data, lm.indptr[:-1])


def rescale_to_unit_neighbor(g: Graph) -> Graph:
    """
    Divide every length by the largest per-vertex nearest-neighbor length so
    that each vertex has an incident edge of length at most 1.
    """
    s = float(nearest_incident_lengths(g).max())
    if s == 1.0:
        return g
    logger.debug(f"Rescaling graph lengths by {s:.6g}")
    return replace(g, lengths=g.lengths / s, theta=g.theta / s, scale=g.scale * s)
