import argparse
import sys

from pydantic import ValidationError

from commands import (
    register_basis,
    register_experiments,
    register_graph,
    register_insert,
    register_interpolate,
)
from config import settings
from lagrange.exceptions import LagrangeError
from schemas import SolverMethod
from utils.logging import get_logger, log_error, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagrange",
        description="Lagrange and local Lagrange bases for interpolation on graphs.",
    )
    parser.add_argument("--seed", type=int, help="Random seed for sampling and shuffles")
    parser.add_argument("--solver", choices=[m.value for m in SolverMethod],
                        help="Least-squares backend (default picks by problem size)")
    parser.add_argument("--tol", type=float, help="Solver tolerance")
    parser.add_argument("--out", help="Output file or directory")
    parser.add_argument("--config", help="JSON file with experiment settings")
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")

    subparsers = parser.add_subparsers(dest="command", required=True)
    register_graph(subparsers)
    register_basis(subparsers)
    register_interpolate(subparsers)
    register_insert(subparsers)
    register_experiments(subparsers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(log_level=args.log_level or settings.log_level, log_file=settings.log_file)

    try:
        return args.handler(args)
    except (LagrangeError, ValidationError) as e:
        log_error(logger, e, {"command": args.command})
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        log_error(logger, e, {"command": args.command, "unexpected": True})
        raise


if __name__ == "__main__":
    sys.exit(main())
