from typing import Optional

import numpy as np
import pandas as pd

from lagrange.exceptions import DatasetError, InvalidInputError
from models import Partition, SignalData


def read_partition(path, n: Optional[int] = None) -> Partition:
    """CSV with columns vertex,status where status is known or unknown."""
    df = pd.read_csv(path)
    if not {"vertex", "status"} <= set(df.columns):
        raise DatasetError(f"{path} needs columns vertex,status")
    status = df["status"].astype(str).str.strip().str.lower()
    bad = sorted(set(status) - {"known", "unknown"})
    if bad:
        raise DatasetError(f"Unknown status values in {path}: {bad}")

    vertices = df["vertex"].to_numpy(dtype=np.int64)
    p = Partition(known=vertices[status == "known"], unknown=vertices[status == "unknown"])
    if n is not None and p.n != n:
        raise InvalidInputError(f"Partition covers {p.n} vertices, graph has {n}")
    return p


def write_partition(p: Partition, path):
    status = np.where(p.known_mask, "known", "unknown")
    pd.DataFrame({"vertex": np.arange(p.n), "status": status}).to_csv(path, index=False)


def read_signal(path, p: Partition) -> SignalData:
    """
    CSV with columns vertex,value. Values on unknown vertices, when present,
    are kept as ground truth.
    """
    df = pd.read_csv(path, float_precision="round_trip")
    if not {"vertex", "value"} <= set(df.columns):
        raise DatasetError(f"{path} needs columns vertex,value")
    vertices = df["vertex"].to_numpy(dtype=np.int64)
    values = pd.to_numeric(df["value"], errors="coerce").to_numpy(dtype=float)
    if np.isnan(values).any():
        raise DatasetError(f"Non-numeric values in {path}")

    known = p.known_mask[vertices]
    missing = np.setdiff1d(p.known, vertices[known])
    if missing.size:
        raise DatasetError(f"No value for known vertices {missing[:10].tolist()}")
    truth = ~known
    return SignalData(
        known=vertices[known],
        values=values[known],
        truth_vertices=vertices[truth] if truth.any() else None,
        truth_values=values[truth] if truth.any() else None,
    )
