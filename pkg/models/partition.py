from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from lagrange.exceptions import InvalidInputError


def _as_index(values) -> np.ndarray:
    if not isinstance(values, np.ndarray):
        values = list(values)
    return np.unique(np.asarray(values, dtype=np.int64))


@dataclass(frozen=True)
class Partition:
    known: np.ndarray
    unknown: np.ndarray

    def __post_init__(self):
        known = _as_index(self.known)
        unknown = _as_index(self.unknown)
        if known.size == 0:
            raise InvalidInputError("Partition needs at least one known vertex")
        if np.intersect1d(known, unknown).size:
            raise InvalidInputError("Known and unknown vertex sets overlap")
        everything = np.union1d(known, unknown)
        if everything[0] != 0 or everything[-1] != everything.size - 1:
            raise InvalidInputError("Known and unknown sets must cover vertices 0..n-1")
        object.__setattr__(self, "known", known)
        object.__setattr__(self, "unknown", unknown)

    @classmethod
    def from_unknown(cls, n: int, unknown: Iterable[int]) -> "Partition":
        unknown = _as_index(unknown)
        return cls(known=np.setdiff1d(np.arange(n), unknown), unknown=unknown)

    @classmethod
    def from_mask(cls, known_mask) -> "Partition":
        known_mask = np.asarray(known_mask, dtype=bool)
        return cls(known=np.flatnonzero(known_mask), unknown=np.flatnonzero(~known_mask))

    @property
    def n(self) -> int:
        return self.known.size + self.unknown.size

    @cached_property
    def known_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.known] = True
        return mask

    def is_known(self, v: int) -> bool:
        return bool(self.known_mask[v])

    def with_vertex(self, known: bool) -> "Partition":
        """Partition after appending vertex n."""
        v = self.n
        if known:
            return Partition(known=np.append(self.known, v), unknown=self.unknown)
        return Partition(known=self.known, unknown=np.append(self.unknown, v))

    def __repr__(self):
        return f"<Partition known={self.known.size} unknown={self.unknown.size}>"


@dataclass(frozen=True)
class Neighborhood:
    """
    Graph ball Omega_v around a center. Members are sorted vertex indices;
    boundary members have at least one neighbor outside the ball. `dirichlet`
    marks a ball grown until its boundary is known.
    """
    center: int
    radius: float
    members: np.ndarray
    boundary: np.ndarray
    known: np.ndarray
    unknown: np.ndarray
    dirichlet: bool = False

    @property
    def interior(self) -> np.ndarray:
        return np.setdiff1d(self.members, self.boundary)

    @property
    def size(self) -> int:
        return self.members.size

    def contains(self, v: int) -> bool:
        i = np.searchsorted(self.members, v)
        return bool(i < self.members.size and self.members[i] == v)

    def __repr__(self):
        return f"<Neighborhood center={self.center} radius={self.radius:.4g} size={self.size}>"
