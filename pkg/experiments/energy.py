"""
Cross-validated regression on the building energy dataset with Lagrange and
local Lagrange quasi-interpolation over a feature-weighted l1 graph.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import time

from joblib import Parallel, delayed
import numpy as np
import pandas as pd
from scipy.sparse.csgraph import minimum_spanning_tree
from scipy.spatial.distance import squareform

from crud.point_manager import read_energy_table
from lagrange.basis import compute_basis
from lagrange.exceptions import DisconnectedGraphError, InvalidInputError
from lagrange.graph import build_graph, pairwise_distances, rescale_to_unit_neighbor
from lagrange.interpolation import quasi_interpolate
from lagrange.laplacian import normalized_laplacian
from lagrange.neighborhoods import neighborhoods
from models import Graph, Partition, PointCloud, SignalData
from schemas import CVFoldRecord, CVReport, CVRow, ExperimentConfig, FeatureImportance, Metric
from utils.logging import get_logger, log_experiment_cell

logger = get_logger(__name__)

ENERGY_FEATURES = [
    "relative_compactness",
    "surface_area",
    "wall_area",
    "roof_area",
    "overall_height",
    "orientation",
    "glazing_area",
]
MSE_FLOOR = 1e-12


def nearest_neighbor_loo_mse(x: np.ndarray, y: np.ndarray) -> float:
    """
    Leave-one-out MSE of a 1-nearest-neighbor regressor on a single feature.
    Equidistant neighbors are averaged.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(d, np.inf)
    nearest = d == d.min(axis=1, keepdims=True)
    prediction = (nearest @ y) / nearest.sum(axis=1)
    return float(np.mean((prediction - y) ** 2))


def feature_importance(X, y, names: Optional[Sequence[str]] = None) -> FeatureImportance:
    """
    Weight of each feature proportional to 1 / MSE of the single-feature
    1-NN regressor, normalized to sum 1. Constant features get the smallest
    positive weight among the others and are reported as zero variance.
    """
    if isinstance(X, pd.DataFrame):
        names = list(names or X.columns)
        X = X.to_numpy(dtype=float)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[1] < 2:
        raise InvalidInputError("Feature importance needs at least two features")
    if X.shape[0] < 2 or X.shape[0] != y.size:
        raise InvalidInputError(f"{X.shape[0]} rows for {y.size} target values")
    names = list(names) if names is not None else [f"x{i}" for i in range(X.shape[1])]

    constant = np.ptp(X, axis=0) == 0
    if constant.all():
        raise InvalidInputError("Every feature is constant")

    mse = np.full(X.shape[1], np.nan)
    for i in np.flatnonzero(~constant):
        mse[i] = max(nearest_neighbor_loo_mse(X[:, i], y), MSE_FLOOR)

    raw = np.zeros(X.shape[1])
    raw[~constant] = 1.0 / mse[~constant]
    raw[constant] = raw[~constant].min()
    weights = raw / raw.sum()

    return FeatureImportance(
        features=names,
        mse=[None if np.isnan(v) else float(v) for v in mse],
        weights=weights.tolist(),
        zero_variance=[names[i] for i in np.flatnonzero(constant)],
    )


def cv_folds(n: int, k: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Shuffle 0..n-1 and split into k nearly equal test folds."""
    if not 2 <= k <= n:
        raise InvalidInputError(f"Cannot split {n} rows into {k} folds")
    return [np.sort(fold) for fold in np.array_split(rng.permutation(n), k)]


def merge_feature_rows(X: np.ndarray, merge: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct feature vectors and, for each row, the index of its vertex."""
    if not merge:
        return X, np.arange(X.shape[0])
    vertices, inverse = np.unique(X, axis=0, return_inverse=True)
    return vertices, inverse.ravel()


def connected_energy_graph(points: np.ndarray, metric: Metric, epsilon_grid: Sequence[float]) -> Tuple[Graph, float]:
    """
    Graph with R_i = (1 + eps) s, s the largest nearest-neighbor distance, for
    the smallest eps in the grid that gives a connected graph; lengths are then
    rescaled so every vertex has a neighbor within distance 1. When no grid
    value connects the graph, R_i is just above the longest edge of a minimum
    spanning tree, the smallest radius that does.
    """
    dists = squareform(pairwise_distances(points, metric))
    nearest = np.where(np.eye(len(points), dtype=bool), np.inf, dists).min(axis=1)
    s = float(nearest.max())
    pc = PointCloud(points=points)

    for eps in epsilon_grid:
        try:
            g = build_graph(pc, metric, (1.0 + eps) * s)
            return rescale_to_unit_neighbor(g), float(eps)
        except DisconnectedGraphError:
            continue

    radius = float(np.nextafter(minimum_spanning_tree(dists).data.max(), np.inf))
    logger.warning(f"No epsilon in the grid connects the graph; using R_i = {radius:.6g} (s = {s:.6g})")
    return rescale_to_unit_neighbor(build_graph(pc, metric, radius)), radius / s - 1.0


@dataclass
class FoldOutcome:
    squared_errors: Dict[str, np.ndarray]  # "lagrange" or outer radius -> per test row
    epsilon: float
    weights: List[float]


def fold_signal(y: np.ndarray, row_vertex: np.ndarray, n_vertices: int,
                train: np.ndarray, test: np.ndarray) -> Tuple[Partition, SignalData]:
    """
    A vertex holding any test row is unknown, so every test row is predicted by
    the interpolant. The remaining vertices are known with the mean target of
    their training rows.
    """
    unknown = np.zeros(n_vertices, dtype=bool)
    unknown[row_vertex[test]] = True
    kept = train[~unknown[row_vertex[train]]]
    counts = np.bincount(row_vertex[kept], minlength=n_vertices)
    sums = np.bincount(row_vertex[kept], weights=y[kept], minlength=n_vertices)
    if not counts.any():
        raise InvalidInputError("Every vertex holds a test row; the fold leaves no known vertex")

    p = Partition.from_mask(counts > 0)
    return p, SignalData(known=p.known, values=sums[p.known] / counts[p.known])


def evaluate_fold(X: np.ndarray, y: np.ndarray, vertices: np.ndarray, row_vertex: np.ndarray,
                  train: np.ndarray, test: np.ndarray, cfg: ExperimentConfig) -> FoldOutcome:
    """
    Vertices holding test rows are unknown, the rest are known. Feature
    weights come from the training rows only.
    """
    importance = feature_importance(X[train], y[train], ENERGY_FEATURES)
    metric = Metric.weighted_l1(importance.weights)
    p, signal = fold_signal(y, row_vertex, vertices.shape[0], train, test)

    g, eps = connected_energy_graph(vertices, metric, cfg.epsilon_grid)
    L = normalized_laplacian(g)
    test_vertices = row_vertex[test]

    full = compute_basis(L, p, "global", cfg.solver)
    squared_errors = {"lagrange": (quasi_interpolate(full, signal)[test_vertices] - y[test]) ** 2}
    for radius in cfg.outer_radii:
        local = compute_basis(L, p, neighborhoods(g, p, radius), cfg.solver)
        squared_errors[str(radius)] = (quasi_interpolate(local, signal)[test_vertices] - y[test]) ** 2

    return FoldOutcome(squared_errors=squared_errors, epsilon=eps, weights=importance.weights)


def _std(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if values.size > 1 else 0.0


def run_energy_cv(cfg: ExperimentConfig, dataset_path: str) -> CVReport:
    """
    Repeated k-fold cross-validation. Every repetition shuffles the rows with
    its own seeded generator; both methods and every outer radius consume the
    same folds. Per-repetition MSE pools the squared errors of all test rows.
    """
    table = read_energy_table(dataset_path, cfg.column_map, ENERGY_FEATURES + list(cfg.targets))
    X = table[ENERGY_FEATURES].to_numpy(dtype=float)
    vertices, row_vertex = merge_feature_rows(X, cfg.merge_duplicates)
    n = X.shape[0]
    if vertices.shape[0] < n:
        logger.info(f"Merged {n} rows into {vertices.shape[0]} distinct feature vectors")

    folds_by_rep = [cv_folds(n, cfg.folds, np.random.default_rng([cfg.seed, rep])) for rep in range(cfg.repetitions)]
    report = CVReport(seed=cfg.seed, config=cfg.model_dump(mode="json"))

    for target in cfg.targets:
        y = table[target].to_numpy(dtype=float)
        tasks = [
            (rep, k, np.setdiff1d(np.arange(n), test), test)
            for rep, folds in enumerate(folds_by_rep)
            for k, test in enumerate(folds)
        ]

        def run(task):
            rep, k, train, test = task
            start_time = time.time()
            outcome = evaluate_fold(X, y, vertices, row_vertex, train, test, cfg)
            log_experiment_cell(logger, "energy-cv", {"target": target, "repetition": rep, "fold": k,
                                                      "epsilon": outcome.epsilon}, time.time() - start_time)
            return outcome

        if cfg.workers > 1:
            outcomes = Parallel(n_jobs=cfg.workers, prefer="threads")(delayed(run)(task) for task in tasks)
        else:
            outcomes = [run(task) for task in tasks]

        pooled = {key: np.zeros(cfg.repetitions) for key in ["lagrange"] + [str(r) for r in cfg.outer_radii]}
        for (rep, k, _, test), outcome in zip(tasks, outcomes):
            lagrange_mse = float(outcome.squared_errors["lagrange"].mean())
            for key, errors in outcome.squared_errors.items():
                pooled[key][rep] += errors.sum()
            for radius in cfg.outer_radii:
                report.folds.append(CVFoldRecord(
                    target=target,
                    outer_radius=radius,
                    repetition=rep,
                    fold=k,
                    lagrange_mse=lagrange_mse,
                    local_mse=float(outcome.squared_errors[str(radius)].mean()),
                    epsilon=outcome.epsilon,
                ))

        per_rep = {key: totals / n for key, totals in pooled.items()}
        for radius in cfg.outer_radii:
            report.rows.append(CVRow(
                target=target,
                outer_radius=radius,
                lagrange_mean=float(per_rep["lagrange"].mean()),
                lagrange_std=_std(per_rep["lagrange"]),
                local_mean=float(per_rep[str(radius)].mean()),
                local_std=_std(per_rep[str(radius)]),
            ))
        report.feature_weights[target] = np.mean([o.weights for o in outcomes], axis=0).tolist()

    return report
