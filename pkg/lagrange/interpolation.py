"""
Quasi-interpolation with a (local) Lagrange basis.
"""
from typing import Optional

import numpy as np

from lagrange.exceptions import DimensionMismatchError, InvalidInputError, UndefinedPredictionError
from lagrange.neighborhoods import graph_ball
from models import BasisMatrix, Graph, SignalData


def _check_signal(b: BasisMatrix, d: SignalData):
    if not np.array_equal(d.known, b.centers):
        raise DimensionMismatchError(
            f"Signal is given on {d.known.size} vertices, basis has {b.column_count} centers"
        )


def quasi_interpolate(b: BasisMatrix, d: SignalData) -> np.ndarray:
    """sum_v f_v chi_v over every center, evaluated at all vertices."""
    _check_signal(b, d)
    return np.asarray(b.matrix @ d.values).ravel()


def local_quasi_interpolate(b: BasisMatrix, d: SignalData, w: int, outer_radius: float, g: Graph) -> float:
    """
    Prediction at w from the centers whose graph distance to w is at most
    `outer_radius`. Requires a local basis built with the same radius.
    """
    _check_signal(b, d)
    if b.mode != "local" or b.radii is None or not np.allclose(b.radii, outer_radius):
        raise InvalidInputError(f"Basis was not built with outer radius {outer_radius}")
    if not 0 <= w < b.n:
        raise InvalidInputError(f"Vertex {w} out of range")

    ball = graph_ball(g, w, outer_radius)
    centers = np.intersect1d(ball.members, b.centers, assume_unique=True)
    if centers.size == 0:
        raise UndefinedPredictionError(f"No known vertex within {outer_radius} of vertex {w}")

    idx = np.searchsorted(b.centers, centers)
    row = b.matrix[w, :].toarray().ravel()
    return float(row[idx] @ d.values[idx])


def mse(prediction: np.ndarray, truth: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    """Mean squared error over the vertices in `mask` (all vertices when omitted)."""
    prediction = np.asarray(prediction, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if prediction.shape != truth.shape:
        raise DimensionMismatchError(f"Prediction shape {prediction.shape} != truth shape {truth.shape}")
    if mask is not None:
        prediction, truth = prediction[mask], truth[mask]
    if prediction.size == 0:
        raise InvalidInputError("Cannot compute MSE over an empty vertex set")
    return float(np.mean((prediction - truth) ** 2))


def near_interpolation_gap(b: BasisMatrix, d: SignalData) -> float:
    """max |I f(v) - f_v| over the known vertices; exactly zero for every basis built here."""
    result = quasi_interpolate(b, d)
    return float(np.abs(result[d.known] - d.values).max())
