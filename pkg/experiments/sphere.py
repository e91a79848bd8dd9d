"""
Sphere experiments: convergence of local Lagrange functions towards the
Lagrange basis on a Fibonacci lattice, and timing of global, local and
single-insertion computations.
"""
from typing import Dict, List, Optional
import time

import numpy as np

from lagrange.basis import basis_discrepancy, compute_basis, sparsity_ratio
from lagrange.bounds import decay_slope
from lagrange.dynamic import insert_vertex
from lagrange.exceptions import InvalidInputError, LagrangeError
from lagrange.graph import build_graph, pairwise_distances
from lagrange.interpolation import mse, quasi_interpolate
from lagrange.laplacian import normalized_laplacian
from lagrange.neighborhoods import neighborhoods
from models import PointCloud, Partition, SignalData
from schemas import (
    ExperimentConfig,
    Metric,
    SphereConvergenceReport,
    SphereConvergenceRow,
    TimingReport,
    TimingRow,
)
from utils.logging import get_logger, log_error, log_experiment_cell

logger = get_logger(__name__)

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def fibonacci_sphere(n: int) -> PointCloud:
    """
    n quasi-uniform points on the unit sphere:
    z_i = 1 - (2i + 1)/n, phi_i = i * golden angle, r_i = sqrt(1 - z_i^2).
    """
    if n < 2:
        raise InvalidInputError("Need at least two lattice points")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = i * GOLDEN_ANGLE
    r = np.sqrt(1.0 - z * z)
    return PointCloud(points=np.column_stack([r * np.cos(phi), r * np.sin(phi), z]))


def select_unknown_every(n: int, step: int, offset: Optional[int] = None) -> Partition:
    """Mark every `step`-th vertex unknown, starting at `offset` (default step - 1)."""
    if step < 2:
        raise InvalidInputError("Step must be at least 2 so that some vertex stays known")
    offset = step - 1 if offset is None else offset
    return Partition.from_unknown(n, np.arange(offset, n, step))


def min_separation(pc: PointCloud, m: Metric) -> float:
    return float(pairwise_distances(pc.points, m).min())


def _failed_rows(mi: float, outer_multipliers: List[float], theta: float, error: Exception) -> List[SphereConvergenceRow]:
    return [
        SphereConvergenceRow(inner_multiplier=mi, outer_multiplier=mo, inner_radius=mi * theta,
                             outer_radius=mo * theta, status="failed", error=str(error))
        for mo in outer_multipliers
    ]


def run_sphere_convergence(cfg: ExperimentConfig) -> SphereConvergenceReport:
    """
    Sweep inner and outer radius multiples of the minimal separation. For each
    cell record MSE of the constant function 1 at the unknown vertices and the
    maximum local/global discrepancy over sampled centers. Failed cells are
    recorded and the sweep continues.
    """
    metric = Metric()
    pc = fibonacci_sphere(cfg.n_points)
    step = max(2, int(round(1.0 / cfg.unknown_fraction)))
    p = select_unknown_every(pc.n, step)
    theta = min_separation(pc, metric)

    rng = np.random.default_rng(cfg.seed)
    sample = np.sort(rng.choice(p.known, size=min(cfg.sample_centers, p.known.size), replace=False))
    ones = SignalData(known=p.known, values=np.ones(p.known.size))
    truth = np.ones(pc.n)

    report = SphereConvergenceReport(seed=cfg.seed, config=cfg.model_dump(mode="json"))
    for mi in cfg.inner_multipliers:
        try:
            g = build_graph(pc, metric, mi * theta)
            L = normalized_laplacian(g)
            full = compute_basis(L, p, "global", cfg.solver, cfg.workers, g.graph_hash())
        except LagrangeError as e:
            log_error(logger, e, {"experiment": "sphere-convergence", "inner_multiplier": mi})
            report.rows.extend(_failed_rows(mi, cfg.outer_multipliers, theta, e))
            continue

        lagrange_mse = mse(quasi_interpolate(full, ones), truth, p.unknown)
        lagrange_sparsity = sparsity_ratio(full)

        for mo in cfg.outer_multipliers:
            start_time = time.time()
            cell = {"inner_multiplier": mi, "outer_multiplier": mo}
            try:
                local = compute_basis(L, p, neighborhoods(g, p, mo * theta), cfg.solver, cfg.workers, g.graph_hash())
            except LagrangeError as e:
                log_error(logger, e, {"experiment": "sphere-convergence", **cell})
                report.rows.extend(_failed_rows(mi, [mo], theta, e))
                continue

            discrepancies = [basis_discrepancy(full, local, int(v)) for v in sample]
            row = SphereConvergenceRow(
                inner_multiplier=mi,
                outer_multiplier=mo,
                inner_radius=mi * theta,
                outer_radius=mo * theta,
                lagrange_mse=lagrange_mse,
                local_mse=mse(quasi_interpolate(local, ones), truth, p.unknown),
                max_inside_discrepancy=max(d.inside for d in discrepancies),
                max_outside_discrepancy=max(d.outside for d in discrepancies),
                max_discrepancy=max(d.linf for d in discrepancies),
                lagrange_sparsity=lagrange_sparsity,
                local_sparsity=sparsity_ratio(local),
            )
            report.rows.append(row)
            log_experiment_cell(logger, "sphere-convergence", {**cell, "max_discrepancy": row.max_discrepancy},
                                time.time() - start_time)

    report.decay_slopes = convergence_slopes(report.rows)
    return report


def convergence_slopes(rows: List[SphereConvergenceRow]) -> Dict[str, float]:
    """Slope of log(max discrepancy) against the outer multiplier, per inner multiplier."""
    slopes = {}
    for mi in sorted({row.inner_multiplier for row in rows}):
        ok = [row for row in rows if row.inner_multiplier == mi and row.status == "ok"]
        if len(ok) >= 2:
            slopes[str(mi)] = decay_slope([row.outer_multiplier for row in ok],
                                          [row.max_discrepancy for row in ok])
    return slopes


def _median_time(func, repeats: int):
    durations, result = [], None
    for _ in range(repeats):
        start = time.perf_counter()
        result = func()
        durations.append(time.perf_counter() - start)
    return float(np.median(durations)), result


def insertion_point(pc: PointCloud) -> np.ndarray:
    """Unit vector halfway between point 0 and its nearest neighbor."""
    d = np.linalg.norm(pc.points - pc.points[0], axis=1)
    d[0] = np.inf
    midpoint = pc.points[0] + pc.points[int(np.argmin(d))]
    return midpoint / np.linalg.norm(midpoint)


def run_timing(cfg: ExperimentConfig) -> TimingReport:
    """
    Median wall-clock time of the Lagrange basis, the local basis and one
    known-vertex insertion for each lattice size, with half the vertices unknown.
    """
    metric = Metric()
    report = TimingReport(seed=cfg.seed, config=cfg.model_dump(mode="json"))

    for n in cfg.timing_sizes:
        pc = fibonacci_sphere(n)
        p = select_unknown_every(pc.n, 2, offset=1)
        theta = min_separation(pc, metric)
        inner, outer = cfg.timing_inner_multiplier * theta, cfg.timing_outer_multiplier * theta
        g = build_graph(pc, metric, inner)
        L = normalized_laplacian(g)

        t_lagrange, _ = _median_time(lambda: compute_basis(L, p, "global", cfg.solver, cfg.workers),
                                     cfg.timing_repeats)
        t_local, local = _median_time(
            lambda: compute_basis(L, p, neighborhoods(g, p, outer), cfg.solver, cfg.workers),
            cfg.timing_repeats,
        )
        point = insertion_point(pc)
        t_update, _ = _median_time(
            lambda: insert_vertex(g, p, local, point, "known", metric, inner, outer, cfg.solver, workers=cfg.workers),
            cfg.timing_repeats,
        )

        row = TimingRow(n_points=n, t_lagrange=t_lagrange, t_local=t_local, t_update=t_update)
        report.rows.append(row)
        log_experiment_cell(logger, "sphere-timing", row.model_dump(), t_lagrange + t_local + t_update)

    return report
