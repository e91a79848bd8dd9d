"""
Graph-distance balls Omega_v. Distances are shortest-path lengths on the
graph with edge lengths as costs, never distances in parameter space.
"""
from typing import List, Optional

import numpy as np
from scipy.sparse.csgraph import dijkstra

from lagrange.exceptions import InvalidInputError
from models import Graph, Neighborhood, Partition


def _boundary(g: Graph, members: np.ndarray) -> np.ndarray:
    inside = np.zeros(g.n, dtype=bool)
    inside[members] = True
    linked = g.adjacency[members] > 0
    outside_links = np.asarray(linked @ (~inside).astype(float)).ravel()
    return members[outside_links > 0]


def make_neighborhood(g: Graph, center: int, radius: float, members: np.ndarray,
                      partition: Optional[Partition] = None, dirichlet: bool = False) -> Neighborhood:
    members = np.unique(np.asarray(members, dtype=np.int64))
    if partition is not None:
        known_mask = partition.known_mask[members]
        known, unknown = members[known_mask], members[~known_mask]
    else:
        known = unknown = np.empty(0, dtype=np.int64)
    return Neighborhood(
        center=int(center),
        radius=float(radius),
        members=members,
        boundary=_boundary(g, members),
        known=known,
        unknown=unknown,
        dirichlet=dirichlet,
    )


def graph_ball(g: Graph, v: int, outer_radius: float, partition: Optional[Partition] = None) -> Neighborhood:
    """All vertices within shortest-path distance `outer_radius` of v (inclusive)."""
    if not 0 <= v < g.n:
        raise InvalidInputError(f"Vertex {v} not in graph with {g.n} vertices")
    dist = dijkstra(g.length_matrix, directed=False, indices=v, limit=outer_radius)
    return make_neighborhood(g, v, outer_radius, np.flatnonzero(dist <= outer_radius), partition)


def dirichlet_closure(g: Graph, partition: Partition, nb: Neighborhood) -> Neighborhood:
    """
    Grow a neighborhood until every boundary vertex is known, by absorbing all
    neighbors of unknown boundary vertices.
    """
    members = nb.members
    while True:
        current = make_neighborhood(g, nb.center, nb.radius, members, partition, dirichlet=True)
        unknown_boundary = current.boundary[~partition.known_mask[current.boundary]]
        if unknown_boundary.size == 0:
            return current
        grown = np.concatenate([members] + [g.neighbors(int(u)) for u in unknown_boundary])
        members = np.unique(grown)


def neighborhoods(g: Graph, partition: Partition, outer_radius: float,
                  dirichlet: bool = False) -> List[Neighborhood]:
    """One ball per known center, in center order."""
    dist = dijkstra(g.length_matrix, directed=False, indices=partition.known, limit=outer_radius)
    dist = np.atleast_2d(dist)
    result = []
    for row, center in zip(dist, partition.known):
        nb = make_neighborhood(g, center, outer_radius, np.flatnonzero(row <= outer_radius), partition)
        result.append(dirichlet_closure(g, partition, nb) if dirichlet else nb)
    return result
