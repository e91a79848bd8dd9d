from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from lagrange.exceptions import DimensionMismatchError, DuplicatePointError, InvalidInputError


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    ids: Optional[np.ndarray] = None
    targets: Optional[pd.DataFrame] = field(default=None, compare=False)

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or points.shape[1] < 1:
            raise DimensionMismatchError(f"Points must be an (n, d) array with d >= 1, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("Point coordinates must be finite")

        ids = np.arange(len(points)) if self.ids is None else np.asarray(self.ids)
        if len(ids) != len(points):
            raise DimensionMismatchError(f"{len(ids)} ids given for {len(points)} points")
        if len(np.unique(ids)) != len(ids):
            raise InvalidInputError("Vertex ids must be unique")

        _, first, counts = np.unique(points, axis=0, return_index=True, return_counts=True)
        if np.any(counts > 1):
            dup_rows = sorted(int(first[i]) for i in np.flatnonzero(counts > 1))
            raise DuplicatePointError(
                f"{int(np.sum(counts[counts > 1]))} rows share coordinates, first rows: {dup_rows[:10]}"
            )

        object.__setattr__(self, "points", points)
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __repr__(self):
        return f"<PointCloud n={self.n} d={self.dim}>"
