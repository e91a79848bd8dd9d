"""
Exceptions raised by the graph, basis, update and interpolation code.
"""
from typing import Dict, List, Optional


class LagrangeError(Exception):
    """Base class for every library error."""


class InvalidInputError(LagrangeError, ValueError):
    pass


class DimensionMismatchError(InvalidInputError):
    pass


class DuplicatePointError(InvalidInputError):
    def __init__(self, message: str, pairs: Optional[List[tuple]] = None):
        super().__init__(message)
        self.pairs = pairs or []


class DisconnectedGraphError(LagrangeError):
    def __init__(self, component_sizes: List[int]):
        self.component_sizes = sorted(component_sizes, reverse=True)
        super().__init__(
            f"Graph is disconnected: {len(self.component_sizes)} components "
            f"with sizes {self.component_sizes}"
        )


class IsolatedVertexError(LagrangeError):
    def __init__(self, message: str, nearest_distance: Optional[float] = None):
        super().__init__(message)
        self.nearest_distance = nearest_distance


class SolverConvergenceError(LagrangeError):
    def __init__(self, message: str, residual: float, iterations: int = 0):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class BasisComputationError(LagrangeError):
    def __init__(self, failures: Dict[int, str]):
        self.failures = dict(sorted(failures.items()))
        centers = ", ".join(str(c) for c in list(self.failures)[:10])
        super().__init__(f"{len(self.failures)} basis column(s) failed, centers: {centers}")


class NotPositiveDefiniteError(InvalidInputError):
    def __init__(self, smallest_eigenvalue: float):
        super().__init__(f"Matrix is not positive definite (lambda_min={smallest_eigenvalue:.3e})")
        self.smallest_eigenvalue = smallest_eigenvalue


class UndefinedPredictionError(LagrangeError):
    pass


class DatasetError(LagrangeError):
    pass
