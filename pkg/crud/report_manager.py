from pathlib import Path
from typing import List, Literal, Optional, Type

import numpy as np
import pandas as pd
from pydantic import BaseModel

from lagrange.exceptions import InvalidInputError
from schemas import ExperimentReport, UpdateDelta
from utils.logging import get_logger

logger = get_logger(__name__)


def _prepare(path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InvalidInputError(f"Cannot create output directory for {path}: {e}")
    return path


def report_frame(report: ExperimentReport) -> pd.DataFrame:
    """One row per configuration cell, columns in row-model field order."""
    return pd.DataFrame(report.row_dicts(), columns=list(report.row_model.model_fields))


def emit_report(report: ExperimentReport, fmt: Literal["csv", "json"], path) -> Path:
    """
    Write the report as CSV (rows only, header even when empty) or JSON
    (the whole report including per-fold records).
    """
    path = _prepare(path)
    try:
        if fmt == "csv":
            report_frame(report).to_csv(path, index=False)
        elif fmt == "json":
            path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        else:
            raise InvalidInputError(f"Unsupported report format: {fmt}")
    except OSError as e:
        raise InvalidInputError(f"Cannot write report to {path}: {e}")
    logger.info(f"Wrote {report.experiment} report ({len(report.rows)} rows) to {path}")
    return path


def load_report(path, report_cls: Type[ExperimentReport]) -> ExperimentReport:
    return report_cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


def load_report_rows(path, row_model: Type[BaseModel]) -> List[BaseModel]:
    """Parse a report CSV back into row models; empty cells become None."""
    df = pd.read_csv(path, float_precision="round_trip")
    df = df.astype(object).where(df.notna(), None)
    return [row_model(**record) for record in df.to_dict(orient="records")]


def write_predictions(path, prediction: np.ndarray, vertices: np.ndarray,
                      ids: Optional[np.ndarray] = None, truth: Optional[np.ndarray] = None) -> Path:
    """vertex_id,predicted[,truth,sq_error] for the given vertices."""
    path = _prepare(path)
    vertices = np.asarray(vertices, dtype=np.int64)
    frame = pd.DataFrame({
        "vertex_id": vertices if ids is None else np.asarray(ids)[vertices],
        "predicted": np.asarray(prediction)[vertices],
    })
    if truth is not None:
        frame["truth"] = np.asarray(truth, dtype=float)
        frame["sq_error"] = (frame["predicted"] - frame["truth"]) ** 2
    frame.to_csv(path, index=False)
    return path


def write_update_delta(delta: UpdateDelta, path) -> Path:
    path = _prepare(path)
    path.write_text(delta.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path
