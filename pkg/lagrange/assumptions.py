"""
Advisory checks for the structural assumptions behind the local/global
discrepancy bounds. Results are reported and logged, never enforced.
"""
from typing import Iterable, Tuple

import numpy as np

from models import Graph, Neighborhood, Partition
from schemas import AssumptionReport
from utils.logging import get_logger

logger = get_logger(__name__)


def validate_assumptions(g: Graph, p: Partition, nbhds: Iterable[Neighborhood]) -> AssumptionReport:
    known = p.known_mask

    unknown_pairs = ~known[g.rows] & ~known[g.cols]
    unknown_edges = [(int(i), int(j)) for i, j in zip(g.rows[unknown_pairs], g.cols[unknown_pairs])]

    dirichlet_violations = []
    for nb in nbhds:
        for b in nb.boundary[~known[nb.boundary]]:
            dirichlet_violations.append((nb.center, int(b)))

    half_rho_max = g.rho_max / 2
    short = g.lengths < half_rho_max
    short_edges = [(int(i), int(j), float(r)) for i, j, r in zip(g.rows[short], g.cols[short], g.lengths[short])]

    report = AssumptionReport(
        unknown_edges_ok=not unknown_edges,
        unknown_edges=unknown_edges,
        dirichlet_ok=not dirichlet_violations,
        dirichlet_violations=dirichlet_violations,
        edge_bound_ok=not short_edges,
        min_edge_length=g.rho_min,
        rho_max=g.rho_max,
        short_edges=short_edges,
    )

    if not report.all_hold:
        logger.warning(
            f"Assumption check: unknown-unknown edges={len(unknown_edges)}, "
            f"non-Dirichlet boundary vertices={len(dirichlet_violations)}, "
            f"edges shorter than rho_max/2={len(short_edges)}"
        )
    return report


def neighbor_bounds(g: Graph, p: Partition) -> Tuple[int, int, int]:
    """(M, M_u, M_k): max neighbor count overall, over unknown and over known vertices."""
    counts = g.neighbor_counts
    m_u = int(counts[p.unknown].max()) if p.unknown.size else 0
    m_k = int(counts[p.known].max()) if p.known.size else 0
    return int(counts.max()), m_u, m_k
