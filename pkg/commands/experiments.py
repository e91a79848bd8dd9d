from pathlib import Path
import json

from config import settings
from crud.report_manager import emit_report
from experiments.energy import run_energy_cv
from experiments.sphere import run_sphere_convergence, run_timing
from lagrange.exceptions import InvalidInputError
from schemas import ExperimentConfig
from utils.logging import get_logger

from commands.options import float_list, int_list, output_path, solver_config

logger = get_logger(__name__)

# flag name on the parser -> ExperimentConfig field
OVERRIDES = {
    "n_points": "n_points",
    "inner_multipliers": "inner_multipliers",
    "outer_multipliers": "outer_multipliers",
    "sample_centers": "sample_centers",
    "sizes": "timing_sizes",
    "repeats": "timing_repeats",
    "outer_radii": "outer_radii",
    "folds": "folds",
    "repetitions": "repetitions",
    "workers": "workers",
}


def load_experiment_config(args, experiment: str) -> ExperimentConfig:
    """--config JSON first, then command-line flags, then the global seed and solver flags."""
    data = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise InvalidInputError(f"Cannot read experiment config {args.config}: {e}")
    data["experiment"] = experiment

    for flag, field in OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[field] = value
    if args.seed is not None:
        data["seed"] = args.seed
    if args.solver is not None or args.tol is not None or "solver" not in data:
        data["solver"] = solver_config(args).model_dump()
    return ExperimentConfig(**data)


def _emit(report, args, name: str):
    out_dir = output_path(args, name)
    csv_path = emit_report(report, "csv", out_dir / f"{name}.csv")
    json_path = emit_report(report, "json", out_dir / f"{name}.json")
    print(f"{report.experiment}: {len(report.rows)} rows -> {csv_path}, {json_path}")


def sphere(args) -> int:
    cfg = load_experiment_config(args, "sphere-convergence")
    report = run_sphere_convergence(cfg)
    _emit(report, args, "sphere_convergence")
    return 0


def timing(args) -> int:
    cfg = load_experiment_config(args, "sphere-timing")
    report = run_timing(cfg)
    _emit(report, args, "sphere_timing")
    return 0


def energy_cv(args) -> int:
    cfg = load_experiment_config(args, "energy-cv")
    dataset = args.dataset or settings.energy_dataset_path
    if not dataset:
        raise InvalidInputError("No dataset given; pass --dataset or set ENERGY_DATASET_PATH")
    report = run_energy_cv(cfg, dataset)
    _emit(report, args, "energy_cv")
    return 0


def register(subparsers):
    parser = subparsers.add_parser("exp", help="Experiments")
    commands = parser.add_subparsers(dest="exp_command", required=True)

    sphere_parser = commands.add_parser("sphere", help="Local versus global convergence on the sphere")
    sphere_parser.add_argument("--n-points", type=int)
    sphere_parser.add_argument("--inner-multipliers", type=float_list)
    sphere_parser.add_argument("--outer-multipliers", type=float_list)
    sphere_parser.add_argument("--sample-centers", type=int)
    sphere_parser.add_argument("--workers", type=int)
    sphere_parser.set_defaults(handler=sphere)

    timing_parser = commands.add_parser("timing", help="Timing of global, local and update computations")
    timing_parser.add_argument("--sizes", type=int_list)
    timing_parser.add_argument("--repeats", type=int)
    timing_parser.add_argument("--workers", type=int)
    timing_parser.set_defaults(handler=timing)

    energy_parser = commands.add_parser("energy-cv", help="Cross-validation on the energy dataset")
    energy_parser.add_argument("--dataset", help="CSV with the energy data")
    energy_parser.add_argument("--outer-radii", type=float_list)
    energy_parser.add_argument("--folds", type=int)
    energy_parser.add_argument("--repetitions", type=int)
    energy_parser.add_argument("--workers", type=int)
    energy_parser.set_defaults(handler=energy_cv)
