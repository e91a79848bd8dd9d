from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import settings
from lagrange.exceptions import DatasetError
from models import PointCloud
from utils.logging import get_logger

logger = get_logger(__name__)


def _read_csv(path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"Cannot read {path}: {e}")


def _numeric(df: pd.DataFrame, columns: Sequence[str], path) -> pd.DataFrame:
    converted = df[list(columns)].apply(pd.to_numeric, errors="coerce")
    bad = [c for c in columns if converted[c].isna().any()]
    if bad:
        raise DatasetError(f"Non-numeric or missing values in {path}, columns: {bad}")
    return converted


def read_points(path, id_column: Optional[str] = "id",
                target_columns: Sequence[str] = ()) -> PointCloud:
    """
    Read a point cloud from CSV. Every column other than the id column and the
    target columns is a feature; target columns are carried along untouched.
    """
    df = _read_csv(path)
    missing = [c for c in target_columns if c not in df.columns]
    if missing:
        raise DatasetError(f"Missing target columns in {path}: {missing}")

    ids = None
    if id_column and id_column in df.columns:
        ids = _numeric(df, [id_column], path)[id_column].to_numpy(dtype=np.int64)
    features = [c for c in df.columns if c != id_column and c not in target_columns]
    if not features:
        raise DatasetError(f"No feature columns in {path}")

    points = _numeric(df, features, path).to_numpy(dtype=float)
    targets = df[list(target_columns)].reset_index(drop=True) if target_columns else None
    logger.info(f"Read {len(points)} points with {len(features)} features from {path}")
    return PointCloud(points=points, ids=ids, targets=targets)


def read_point(path, id_column: Optional[str] = "id") -> Tuple[np.ndarray, Optional[int]]:
    """Coordinates and optional vertex id of the single point in a one-row CSV."""
    pc = read_points(path, id_column=id_column)
    if len(pc.points) != 1:
        raise DatasetError(f"Expected exactly one point in {path}, found {len(pc.points)}")
    has_id = bool(id_column) and id_column in _read_csv(path).columns
    return pc.points[0], int(pc.ids[0]) if has_id else None


def write_points(pc: PointCloud, path):
    columns = {"id": pc.ids}
    for k in range(pc.dim):
        columns[f"x{k}"] = pc.points[:, k]
    df = pd.DataFrame(columns)
    if pc.targets is not None:
        df = pd.concat([df, pc.targets.reset_index(drop=True)], axis=1)
    df.to_csv(path, index=False)


def read_energy_table(path, overrides: Optional[Dict[str, str]] = None,
                      required: Optional[List[str]] = None) -> pd.DataFrame:
    """
    Load the energy dataset and rename its columns to canonical names using the
    configured column map. Columns outside the map are dropped.
    """
    column_map = settings.energy_columns(overrides)
    df = _read_csv(path)

    required = required or list(column_map)
    unmapped = [name for name in required if name not in column_map]
    if unmapped:
        raise DatasetError(f"No column mapping for {unmapped}")
    missing = [column_map[name] for name in required if column_map[name] not in df.columns]
    if missing:
        raise DatasetError(f"Missing columns in {path}: {missing}")

    source = [column_map[name] for name in required]
    table = _numeric(df, source, path)
    table.columns = required
    logger.info(f"Read energy dataset with {len(table)} rows from {path}")
    return table.reset_index(drop=True)
