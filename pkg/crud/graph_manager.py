from dataclasses import replace
from pathlib import Path
import json

import numpy as np
import pandas as pd

from lagrange.exceptions import DatasetError
from lagrange.graph import graph_from_edges
from models import Graph
from schemas import Metric
from utils.logging import get_logger

logger = get_logger(__name__)

EDGES_FILE = "edges.csv"
META_FILE = "graph.json"
POINTS_FILE = "points.csv"


def graph_metadata(g: Graph) -> dict:
    return {
        "n": g.n,
        "edges": g.edge_count,
        "theta": g.theta,
        "rho_max": g.rho_max,
        "max_degree": g.max_degree,
        "scale": g.scale,
        "metric": g.metric.model_dump(mode="json"),
        "graph_hash": g.graph_hash(),
    }


def save_graph(g: Graph, out_dir) -> Path:
    """Write edges.csv, graph.json and, when coordinates exist, points.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    order = np.lexsort((g.cols, g.rows))
    pd.DataFrame({"i": g.rows[order], "j": g.cols[order], "length": g.lengths[order]}).to_csv(
        out_dir / EDGES_FILE, index=False
    )
    with (out_dir / META_FILE).open("w", encoding="utf-8") as f:
        json.dump(graph_metadata(g), f, indent=2)

    if g.points is not None:
        columns = {"id": g.ids if g.ids is not None else np.arange(g.n)}
        for k in range(g.points.shape[1]):
            columns[f"x{k}"] = g.points[:, k]
        pd.DataFrame(columns).to_csv(out_dir / POINTS_FILE, index=False)

    logger.info(f"Saved graph with {g.n} vertices and {g.edge_count} edges to {out_dir}")
    return out_dir


def load_graph(out_dir) -> Graph:
    """Inverse of save_graph; the stored hash must match the edges read back."""
    out_dir = Path(out_dir)
    try:
        with (out_dir / META_FILE).open("r", encoding="utf-8") as f:
            meta = json.load(f)
        edges = pd.read_csv(out_dir / EDGES_FILE, float_precision="round_trip")
    except (OSError, ValueError) as e:
        raise DatasetError(f"Cannot read graph from {out_dir}: {e}")

    points = ids = None
    points_path = out_dir / POINTS_FILE
    if points_path.exists():
        df = pd.read_csv(points_path, float_precision="round_trip")
        ids = df["id"].to_numpy(dtype=np.int64)
        points = df.drop(columns=["id"]).to_numpy(dtype=float)

    g = graph_from_edges(
        meta["n"],
        zip(edges["i"], edges["j"], edges["length"]),
        theta=meta["theta"],
        points=points,
        metric=Metric(**meta["metric"]),
        scale=meta["scale"],
    )
    g = replace(g, ids=ids)
    if g.graph_hash() != meta["graph_hash"]:
        raise DatasetError(f"Graph hash mismatch in {out_dir}")
    return g
