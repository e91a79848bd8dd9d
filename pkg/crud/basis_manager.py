from pathlib import Path
import json

import numpy as np
import pandas as pd
import scipy.sparse as sp

from lagrange.exceptions import DatasetError
from models import BasisMatrix
from schemas import SolverConfig
from utils.logging import get_logger

logger = get_logger(__name__)

TRIPLETS_FILE = "basis.csv"
META_FILE = "basis.json"


def save_basis(b: BasisMatrix, out_dir) -> Path:
    """
    Triplets row,col,value (col is the column index, centers map it back to a
    vertex) plus a JSON sidecar.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    coo = b.matrix.tocoo()
    order = np.lexsort((coo.row, coo.col))
    pd.DataFrame({"row": coo.row[order], "col": coo.col[order], "value": coo.data[order]}).to_csv(
        out_dir / TRIPLETS_FILE, index=False
    )

    meta = {
        "n": b.n,
        "mode": b.mode,
        "centers": b.centers.tolist(),
        "radii": None if b.radii is None else b.radii.tolist(),
        "supports": None if b.supports is None else [s.tolist() for s in b.supports],
        "solver": b.solver.model_dump(mode="json"),
        "graph_hash": b.graph_hash,
        "dirichlet": b.dirichlet,
    }
    with (out_dir / META_FILE).open("w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2)

    logger.info(f"Saved {b.mode} basis with {b.column_count} columns ({b.matrix.nnz} nonzeros) to {out_dir}")
    return out_dir


def load_basis(out_dir) -> BasisMatrix:
    out_dir = Path(out_dir)
    try:
        with (out_dir / META_FILE).open("r", encoding="utf-8") as f:
            meta = json.load(f)
        triplets = pd.read_csv(out_dir / TRIPLETS_FILE, float_precision="round_trip")
    except (OSError, ValueError) as e:
        raise DatasetError(f"Cannot read basis from {out_dir}: {e}")

    shape = (meta["n"], len(meta["centers"]))
    matrix = sp.csc_matrix(
        (triplets["value"].to_numpy(dtype=float),
         (triplets["row"].to_numpy(dtype=np.int64), triplets["col"].to_numpy(dtype=np.int64))),
        shape=shape,
    )
    supports = meta.get("supports")
    return BasisMatrix(
        matrix=matrix,
        centers=np.asarray(meta["centers"], dtype=np.int64),
        mode=meta["mode"],
        radii=None if meta.get("radii") is None else np.asarray(meta["radii"], dtype=float),
        supports=None if supports is None else tuple(np.asarray(s, dtype=np.int64) for s in supports),
        solver=SolverConfig(**meta["solver"]),
        graph_hash=meta.get("graph_hash"),
        dirichlet=bool(meta.get("dirichlet", False)),
    )
