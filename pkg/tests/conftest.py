"""
Test configuration and fixtures for pytest.
"""
import os

import numpy as np
import pandas as pd
import pytest

# Keep test runs independent of a developer .env
os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("WORKERS", "1")

from experiments.sphere import fibonacci_sphere, min_separation, select_unknown_every
from lagrange.graph import build_graph, graph_from_edges
from lagrange.laplacian import normalized_laplacian
from models import Graph, Partition, PointCloud
from schemas import Metric


def _random_connected_graph(rng: np.random.Generator, n: int, extra_edges: int = None) -> Graph:
    """Random spanning tree plus extra random edges, lengths in [0.5, 1.5]."""
    extra_edges = n if extra_edges is None else extra_edges
    order = rng.permutation(n)
    edges = {}
    for k in range(1, n):
        a, b = int(order[k]), int(order[rng.integers(0, k)])
        edges[(min(a, b), max(a, b))] = float(rng.uniform(0.5, 1.5))
    for _ in range(extra_edges):
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        edges.setdefault((min(a, b), max(a, b)), float(rng.uniform(0.5, 1.5)))
    return graph_from_edges(n, [(i, j, r) for (i, j), r in sorted(edges.items())])


def _random_partition(rng: np.random.Generator, n: int, unknown_fraction: float = 0.4) -> Partition:
    """At least one known and one unknown vertex."""
    unknown_count = int(np.clip(round(unknown_fraction * n), 1, n - 1))
    return Partition.from_unknown(n, rng.choice(n, size=unknown_count, replace=False))


def _jittered_grid(rng: np.random.Generator, side: int = 6, jitter: float = 0.1) -> PointCloud:
    xs, ys = np.meshgrid(np.arange(side, dtype=float), np.arange(side, dtype=float))
    points = np.column_stack([xs.ravel(), ys.ravel()])
    return PointCloud(points=points + rng.uniform(-jitter, jitter, size=points.shape))


@pytest.fixture
def rng():
    """Seeded generator for reproducible random instances."""
    return np.random.default_rng(20240611)


@pytest.fixture
def make_random_graph():
    return _random_connected_graph


@pytest.fixture
def make_random_partition():
    return _random_partition


@pytest.fixture
def path_graph():
    """Path 0-1-2-3-4 with unit lengths."""
    return graph_from_edges(5, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)])


@pytest.fixture
def alternating_partition():
    """Vertices 1 and 3 unknown on the five-vertex path."""
    return Partition.from_unknown(5, [1, 3])


@pytest.fixture
def grid_cloud(rng):
    return _jittered_grid(rng)


@pytest.fixture
def grid_graph(grid_cloud):
    """6 x 6 jittered grid joined at distance < 1.6 (grid neighbors and diagonals)."""
    return build_graph(grid_cloud, Metric(), 1.6)


@pytest.fixture
def grid_partition():
    return Partition.from_unknown(36, np.arange(2, 36, 3))


@pytest.fixture
def grid_laplacian(grid_graph):
    return normalized_laplacian(grid_graph)


@pytest.fixture
def energy_csv(tmp_path):
    """
    Synthetic table with the UCI column names: 120 rows, a few repeated
    feature vectors, loads driven mostly by compactness and height.
    """
    rng = np.random.default_rng(7)
    n = 120
    compactness = rng.choice([0.62, 0.66, 0.71, 0.76, 0.82, 0.9, 0.98], size=n)
    height = rng.choice([3.5, 7.0], size=n)
    glazing = rng.choice([0.0, 0.1, 0.25, 0.4], size=n)
    orientation = rng.choice([2, 3, 4, 5], size=n).astype(float)
    df = pd.DataFrame({
        "X1": compactness,
        "X2": 800 - 300 * compactness,
        "X3": rng.choice([245.0, 294.0, 318.5], size=n),
        "X4": 120 + 100 * (height < 5),
        "X5": height,
        "X6": orientation,
        "X7": glazing,
        "X8": rng.integers(0, 6, size=n),
    })
    df["Y1"] = 40 * compactness + 3 * height + 20 * glazing + rng.normal(0, 0.2, size=n)
    df["Y2"] = 35 * compactness + 2.5 * height + 15 * glazing + rng.normal(0, 0.3, size=n)
    path = tmp_path / "energy.csv"
    df.to_csv(path, index=False)
    return path


@pytest.fixture
def star_graph():
    """Hub 0 with three unit-length leaves."""
    return graph_from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])


@pytest.fixture
def small_sphere():
    """100-point Fibonacci lattice joined at three times its minimal separation, every third vertex unknown."""
    pc = fibonacci_sphere(100)
    theta = min_separation(pc, Metric())
    return pc, build_graph(pc, Metric(), 3 * theta), select_unknown_every(100, 3), theta
