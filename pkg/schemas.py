from pydantic import BaseModel, Field, computed_field, field_validator, model_validator
from enum import Enum
from typing import ClassVar, Dict, List, Literal, Optional, Tuple, Type

from config import settings


class MetricKind(str, Enum):
    EUCLIDEAN = "euclidean"
    WEIGHTED_MINKOWSKI = "weighted-minkowski"


class Metric(BaseModel):
    kind: MetricKind = MetricKind.EUCLIDEAN
    p: float = 2.0
    weights: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_metric(self):
        if self.kind == MetricKind.EUCLIDEAN:
            self.p = 2.0
        if self.p < 1:
            raise ValueError(f"Minkowski order p must be >= 1, got {self.p}")
        if self.kind == MetricKind.WEIGHTED_MINKOWSKI:
            if not self.weights:
                raise ValueError("weighted-minkowski metric requires feature weights")
            if any(w < 0 for w in self.weights):
                raise ValueError("feature weights must be nonnegative")
            if not any(w > 0 for w in self.weights):
                raise ValueError("at least one feature weight must be positive")
        return self

    @classmethod
    def weighted_l1(cls, weights: List[float]) -> "Metric":
        return cls(kind=MetricKind.WEIGHTED_MINKOWSKI, p=1.0, weights=list(weights))


class SolverMethod(str, Enum):
    DIRECT = "normal-equations-direct"
    LSQR = "iterative-lsqr"


class SolverConfig(BaseModel):
    method: Optional[SolverMethod] = None  # None picks per problem size
    tolerance: float = Field(default_factory=lambda: settings.solver_tolerance, gt=0)
    max_iterations: Optional[int] = Field(default=None, gt=0)

    def iteration_limit(self, unknowns: int) -> int:
        return self.max_iterations or max(10 * unknowns, 1)

    @classmethod
    def from_settings(cls, method: Optional[str] = None, tolerance: Optional[float] = None):
        return cls(
            method=method or settings.solver_method or None,
            tolerance=tolerance or settings.solver_tolerance,
        )


class AssumptionReport(BaseModel):
    unknown_edges_ok: bool
    unknown_edges: List[Tuple[int, int]] = []
    dirichlet_ok: bool
    dirichlet_violations: List[Tuple[int, int]] = []  # (center, unknown boundary vertex)
    edge_bound_ok: bool
    min_edge_length: float
    rho_max: float
    short_edges: List[Tuple[int, int, float]] = []

    @property
    def all_hold(self) -> bool:
        return self.unknown_edges_ok and self.dirichlet_ok and self.edge_bound_ok


class Discrepancy(BaseModel):
    center: int
    inside: float
    outside: float

    @property
    def linf(self) -> float:
        return max(self.inside, self.outside)


class InfNormBound(BaseModel):
    lhs: float
    rhs: float
    lambda_min: float
    holds: bool


class LemmaBounds(BaseModel):
    inverse_norm: float
    inverse_bound: float
    inverse_holds: bool
    coupling_norm: float
    coupling_bound: float
    coupling_holds: bool


class NewVertex(BaseModel):
    id: int
    index: int
    coordinates: List[float]
    status: Literal["known", "unknown"]


class UpdateDelta(BaseModel):
    new_vertex: NewVertex
    new_edges: List[Tuple[int, float]]
    affected_centers: List[int]
    duration_seconds: float = 0.0

    @computed_field
    @property
    def affected_count(self) -> int:
        return len(self.affected_centers)


class FeatureImportance(BaseModel):
    features: List[str]
    mse: List[Optional[float]]
    weights: List[float]
    zero_variance: List[str] = []


class ExperimentConfig(BaseModel):
    experiment: Literal["sphere-convergence", "sphere-timing", "energy-cv"] = "sphere-convergence"
    n_points: int = Field(default=1000, ge=2)
    unknown_fraction: float = Field(default=1 / 3, gt=0, lt=1)
    inner_multipliers: List[float] = [2.0, 3.0, 4.0]
    outer_multipliers: List[float] = [4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0]
    sample_centers: int = Field(default=25, gt=0)
    timing_sizes: List[int] = [250, 500, 1000, 2000]
    timing_repeats: int = Field(default=3, gt=0)
    timing_inner_multiplier: float = 3.0
    timing_outer_multiplier: float = 8.0
    outer_radii: List[float] = [3.0, 4.0, 5.0, 6.0, 7.0, 8.0]
    folds: int = Field(default=10, ge=2)
    repetitions: int = Field(default=20, gt=0)
    epsilon_grid: List[float] = [round(0.1 * i, 1) for i in range(11)]
    targets: List[str] = ["heating_load", "cooling_load"]
    column_map: Dict[str, str] = {}
    merge_duplicates: bool = True
    seed: int = Field(default_factory=lambda: settings.seed)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    workers: int = Field(default_factory=lambda: settings.workers, gt=0)
    output_csv: Optional[str] = None
    output_json: Optional[str] = None

    @field_validator("inner_multipliers", "outer_multipliers", "timing_sizes", "outer_radii")
    @classmethod
    def positive_sweep(cls, value):
        if not value:
            raise ValueError("sweep must be nonempty")
        if any(v <= 0 for v in value):
            raise ValueError("sweep values must be positive")
        return value

    @field_validator("epsilon_grid")
    @classmethod
    def epsilon_sweep(cls, value):
        if not value or any(v < 0 for v in value):
            raise ValueError("epsilon grid must be nonempty and nonnegative")
        return sorted(value)


class SphereConvergenceRow(BaseModel):
    inner_multiplier: float
    outer_multiplier: float
    inner_radius: Optional[float] = None
    outer_radius: Optional[float] = None
    lagrange_mse: Optional[float] = None
    local_mse: Optional[float] = None
    max_inside_discrepancy: Optional[float] = None
    max_outside_discrepancy: Optional[float] = None
    max_discrepancy: Optional[float] = None
    lagrange_sparsity: Optional[float] = None
    local_sparsity: Optional[float] = None
    status: str = "ok"
    error: Optional[str] = None


class TimingRow(BaseModel):
    n_points: int
    t_lagrange: float
    t_local: float
    t_update: float


class CVRow(BaseModel):
    target: str
    outer_radius: float
    lagrange_mean: float
    lagrange_std: float
    local_mean: float
    local_std: float


class CVFoldRecord(BaseModel):
    target: str
    outer_radius: float
    repetition: int
    fold: int
    lagrange_mse: float
    local_mse: float
    epsilon: float


class ExperimentReport(BaseModel):
    row_model: ClassVar[Type[BaseModel]]

    experiment: str
    seed: int
    config: Dict = {}

    def row_dicts(self) -> List[Dict]:
        return [row.model_dump(mode="json") for row in self.rows]


class SphereConvergenceReport(ExperimentReport):
    row_model: ClassVar[Type[BaseModel]] = SphereConvergenceRow

    experiment: str = "sphere-convergence"
    rows: List[SphereConvergenceRow] = []
    decay_slopes: Dict[str, float] = {}


class TimingReport(ExperimentReport):
    row_model: ClassVar[Type[BaseModel]] = TimingRow

    experiment: str = "sphere-timing"
    rows: List[TimingRow] = []


class CVReport(ExperimentReport):
    row_model: ClassVar[Type[BaseModel]] = CVRow

    experiment: str = "energy-cv"
    rows: List[CVRow] = []
    folds: List[CVFoldRecord] = []
    feature_weights: Dict[str, List[float]] = {}
