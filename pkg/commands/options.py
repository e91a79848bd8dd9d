"""
Argument helpers shared by the command handlers.
"""
from pathlib import Path
from typing import List
import argparse

from config import settings
from schemas import SolverConfig


def float_list(value: str) -> List[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated numbers, got {value!r}")


def int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma separated integers, got {value!r}")


def solver_config(args) -> SolverConfig:
    return SolverConfig.from_settings(getattr(args, "solver", None), getattr(args, "tol", None))


def output_path(args, default: str) -> Path:
    """--out when given, otherwise <output_dir>/<default>."""
    if getattr(args, "out", None):
        return Path(args.out)
    return Path(settings.output_dir) / default


def workers(args) -> int:
    return getattr(args, "workers", None) or settings.workers
