from dataclasses import dataclass
from typing import Optional

import numpy as np

from lagrange.exceptions import DimensionMismatchError, InvalidInputError


@dataclass(frozen=True)
class SignalData:
    """Values f_v at the known vertices, plus optional ground truth elsewhere."""
    known: np.ndarray
    values: np.ndarray
    truth_vertices: Optional[np.ndarray] = None
    truth_values: Optional[np.ndarray] = None

    def __post_init__(self):
        known = np.asarray(self.known, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        if known.shape != values.shape:
            raise DimensionMismatchError(f"{values.size} values for {known.size} known vertices")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Known values must be finite")
        order = np.argsort(known)
        object.__setattr__(self, "known", known[order])
        object.__setattr__(self, "values", values[order])
        if self.truth_vertices is not None:
            tv = np.asarray(self.truth_vertices, dtype=np.int64)
            tval = np.asarray(self.truth_values, dtype=float)
            if tv.shape != tval.shape:
                raise DimensionMismatchError("Truth vertices and values differ in length")
            object.__setattr__(self, "truth_vertices", tv)
            object.__setattr__(self, "truth_values", tval)

    @classmethod
    def from_function(cls, partition, values_over_all: np.ndarray) -> "SignalData":
        """Sample a signal defined on every vertex; the unknown part becomes the truth."""
        values_over_all = np.asarray(values_over_all, dtype=float)
        return cls(
            known=partition.known,
            values=values_over_all[partition.known],
            truth_vertices=partition.unknown,
            truth_values=values_over_all[partition.unknown],
        )

    def scaled(self, alpha: float) -> "SignalData":
        return SignalData(self.known, alpha * self.values, self.truth_vertices,
                          None if self.truth_values is None else alpha * self.truth_values)

    def __add__(self, other: "SignalData") -> "SignalData":
        if not np.array_equal(self.known, other.known):
            raise DimensionMismatchError("Signals are defined on different known sets")
        return SignalData(self.known, self.values + other.values)
