"""
Single-vertex insertion with a localized refresh of the local Lagrange basis.

Inserting v0 changes the degree of every neighbor x of v0, and with it every
Laplacian entry in the rows and columns of x. A column for center w must be
recomputed when v0 enters Omega_w or when Omega_w contains a vertex whose
degree changed; every other column is carried over untouched.
"""
from typing import Iterable, Literal, Mapping, Optional, Set, Tuple
import time

import numpy as np
from scipy.sparse.csgraph import dijkstra

from lagrange.basis import assemble_columns, compute_basis, local_column_entries, map_columns
from lagrange.exceptions import DimensionMismatchError, DuplicatePointError, InvalidInputError, IsolatedVertexError
from lagrange.graph import distances_to
from lagrange.laplacian import normalized_laplacian
from lagrange.neighborhoods import dirichlet_closure, make_neighborhood
from models import BasisMatrix, Graph, Partition
from schemas import Metric, NewVertex, SolverConfig, UpdateDelta
from utils.logging import get_logger, log_vertex_insertion

logger = get_logger(__name__)


def add_vertex(g: Graph, point, inner_radius: float, m: Optional[Metric] = None,
               point_id: Optional[int] = None) -> Tuple[Graph, np.ndarray, np.ndarray]:
    """
    Append the point as vertex n with an edge to every vertex closer than
    `inner_radius`. Returns the new graph, the neighbor indices and the edge lengths.
    """
    if g.points is None:
        raise InvalidInputError("Graph has no coordinates; cannot place a new point")
    m = m or g.metric
    point = np.asarray(point, dtype=float).ravel()
    dists = distances_to(g.points, point, m) / g.scale

    duplicates = np.flatnonzero(dists == 0)
    if duplicates.size:
        raise DuplicatePointError(f"Point coincides with vertex {int(duplicates[0])}",
                                  pairs=[(int(duplicates[0]), g.n)])
    neighbors = np.flatnonzero(dists < inner_radius)
    if neighbors.size == 0:
        raise IsolatedVertexError(
            f"No existing vertex within inner radius {inner_radius:.6g} (nearest at {dists.min():.6g})",
            nearest_distance=float(dists.min()),
        )

    v0 = g.n
    ids = g.ids if g.ids is not None else np.arange(g.n)
    new_id = int(point_id) if point_id is not None else int(np.max(ids)) + 1
    if new_id in set(ids.tolist()):
        raise InvalidInputError(f"Vertex id {new_id} already in use")

    g_new = Graph(
        n=g.n + 1,
        rows=np.concatenate([g.rows, neighbors]).astype(np.int64),
        cols=np.concatenate([g.cols, np.full(neighbors.size, v0)]).astype(np.int64),
        lengths=np.concatenate([g.lengths, dists[neighbors]]),
        theta=min(g.theta, float(dists.min())),
        metric=m,
        scale=g.scale,
        points=np.vstack([g.points, point]),
        ids=np.append(ids, new_id),
    )
    return g_new, neighbors, dists[neighbors]


def affected_centers(g_new: Graph, v0: int, centers: Iterable[int], outer_radius: float,
                     supports: Optional[Mapping[int, np.ndarray]] = None) -> Set[int]:
    """
    Centers within `outer_radius` of v0 or of any neighbor of v0 in the
    updated graph, i.e. whose ball holds v0 or a vertex with a changed degree.
    With `supports` (center -> stored ball members) a center is also affected
    when its stored ball holds a changed-degree vertex, which covers balls
    grown past `outer_radius` by a Dirichlet closure.
    """
    centers = [int(c) for c in centers]
    changed = g_new.neighbors(v0)
    sources = np.concatenate([[v0], changed]).astype(np.int64)
    dist = dijkstra(g_new.length_matrix, directed=False, indices=sources,
                    limit=outer_radius, min_only=True)
    affected = {c for c in centers if dist[c] <= outer_radius}
    if supports is not None:
        affected |= {c for c in centers if np.isin(supports[c], changed).any()}
    return affected


def resolve_outer_radius(b: BasisMatrix, outer_radius: Optional[float] = None) -> float:
    """
    The outer radius of a local basis. A requested radius must match the one
    the basis was built with.
    """
    stored = b.common_radius()
    if stored is None and b.radii is not None and b.radii.size:
        raise InvalidInputError("Basis columns use different outer radii")
    if outer_radius is None:
        if stored is None:
            raise InvalidInputError("Basis has no centers; an outer radius is required")
        return stored
    if stored is not None and not np.isclose(outer_radius, stored, rtol=1e-12, atol=0.0):
        raise InvalidInputError(f"Outer radius {outer_radius:.6g} does not match the basis radius {stored:.6g}")
    return stored if stored is not None else float(outer_radius)


def insert_vertex(g: Graph, p: Partition, b: BasisMatrix, point, status: Literal["known", "unknown"],
                  m: Optional[Metric], inner_radius: float, outer_radius: Optional[float] = None,
                  cfg: Optional[SolverConfig] = None, point_id: Optional[int] = None,
                  workers: int = 1) -> Tuple[Graph, Partition, BasisMatrix, UpdateDelta]:
    """
    Insert a new data point and refresh the basis. Local columns keep the
    radius and ball type (plain or Dirichlet-closed) the basis was built with;
    `outer_radius` may be omitted and must match the basis when given. A known
    point becomes a new center. Columns outside the affected set are copied
    unchanged.
    """
    if status not in ("known", "unknown"):
        raise InvalidInputError(f"Status must be 'known' or 'unknown', got {status!r}")
    if b.n != g.n or p.n != g.n:
        raise DimensionMismatchError(f"Graph has {g.n} vertices, partition {p.n}, basis {b.n} rows")
    if b.mode == "local":
        outer_radius = resolve_outer_radius(b, outer_radius)
    cfg = cfg or b.solver
    start_time = time.time()

    g_new, neighbors, lengths = add_vertex(g, point, inner_radius, m, point_id)
    v0 = g.n
    L_new = normalized_laplacian(g_new)
    p_new = p.with_vertex(known=status == "known")

    if b.mode == "lagrange":
        b_new = compute_basis(L_new, p_new, "global", cfg, workers, graph_hash=g_new.graph_hash())
        refreshed = set(int(c) for c in p_new.known)
    else:
        supports = {int(c): b.support(int(c)) for c in b.centers}
        refreshed = affected_centers(g_new, v0, b.centers, outer_radius, supports)
        if status == "known":
            refreshed.add(v0)
        b_new = _refresh_local_basis(g_new, L_new, p_new, b, sorted(refreshed), outer_radius, cfg, workers)

    delta = UpdateDelta(
        new_vertex=NewVertex(id=int(g_new.ids[v0]), index=v0,
                             coordinates=[float(x) for x in g_new.points[v0]], status=status),
        new_edges=[(int(j), float(r)) for j, r in zip(neighbors, lengths)],
        affected_centers=sorted(refreshed),
        duration_seconds=time.time() - start_time,
    )
    log_vertex_insertion(logger, v0, status, neighbors.size, delta.affected_count, delta.duration_seconds)
    return g_new, p_new, b_new, delta


def _refresh_local_basis(g_new: Graph, L_new, p_new: Partition, b: BasisMatrix, refreshed,
                         outer_radius: float, cfg: SolverConfig, workers: int) -> BasisMatrix:
    old_columns = b.columns_by_center()
    old_supports = {int(c): b.support(int(c)) for c in b.centers}
    old_radii = {int(c): b.radius(int(c)) for c in b.centers}

    refreshed = np.asarray(refreshed, dtype=np.int64)
    balls = {}
    if refreshed.size:
        dist = np.atleast_2d(dijkstra(g_new.length_matrix, directed=False, indices=refreshed, limit=outer_radius))
        for row, center in zip(dist, refreshed):
            nb = make_neighborhood(g_new, center, outer_radius, np.flatnonzero(row <= outer_radius), p_new)
            balls[int(center)] = dirichlet_closure(g_new, p_new, nb) if b.dirichlet else nb
    new_entries = dict(zip(
        balls,
        map_columns(lambda nb: local_column_entries(L_new, p_new, nb, cfg), balls.values(), list(balls), workers),
    ))

    columns, supports, radii = [], [], []
    for c in p_new.known:
        c = int(c)
        if c in balls:
            columns.append(new_entries[c])
            supports.append(balls[c].members)
            radii.append(outer_radius)
        else:
            columns.append(old_columns[c])
            supports.append(old_supports[c])
            radii.append(old_radii[c])

    return BasisMatrix(
        matrix=assemble_columns(g_new.n, columns),
        centers=p_new.known,
        mode="local",
        radii=np.array(radii, dtype=float),
        supports=tuple(supports),
        solver=cfg,
        graph_hash=g_new.graph_hash(),
        dirichlet=b.dirichlet,
    )
