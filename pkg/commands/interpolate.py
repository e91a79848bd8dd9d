import numpy as np

from crud.basis_manager import load_basis
from crud.graph_manager import load_graph
from crud.partition_manager import read_partition, read_signal
from crud.report_manager import write_predictions
from lagrange.exceptions import InvalidInputError
from lagrange.interpolation import local_quasi_interpolate, mse, near_interpolation_gap, quasi_interpolate
from utils.logging import get_logger

from commands.options import output_path

logger = get_logger(__name__)


def interpolate(args) -> int:
    """
    Predict the unknown vertices from known values. With --vertex only that
    vertex is predicted from the centers within --outer-radius.
    """
    g = load_graph(args.graph)
    p = read_partition(args.partition, g.n)
    b = load_basis(args.basis)
    d = read_signal(args.signal, p)

    if args.vertex is not None:
        radius = args.outer_radius
        if radius is None and b.radii is not None:
            radius = float(b.radii.max())
        if radius is None:
            raise InvalidInputError("--outer-radius is required with a Lagrange basis")
        value = local_quasi_interpolate(b, d, args.vertex, radius, g)
        print(f"vertex {args.vertex}: {value:.12g}")
        return 0

    prediction = quasi_interpolate(b, d)
    logger.info(f"Known-vertex interpolation gap: {near_interpolation_gap(b, d):.3e}")

    truth = None
    vertices = p.unknown
    if d.truth_vertices is not None:
        vertices = d.truth_vertices
        truth = d.truth_values
        full_truth = np.zeros(g.n)
        full_truth[vertices] = truth
        logger.info(f"MSE on {vertices.size} vertices with ground truth: {mse(prediction, full_truth, vertices):.6g}")

    out_path = write_predictions(output_path(args, "predictions.csv"), prediction, vertices, g.ids, truth)
    print(f"predictions: {vertices.size} vertices -> {out_path}")
    return 0


def register(subparsers):
    parser = subparsers.add_parser("interpolate", help="Quasi-interpolate a signal")
    parser.add_argument("--graph", required=True)
    parser.add_argument("--partition", required=True)
    parser.add_argument("--basis", required=True)
    parser.add_argument("--signal", required=True, help="CSV vertex,value")
    parser.add_argument("--vertex", type=int, help="Predict a single vertex from nearby centers")
    parser.add_argument("--outer-radius", type=float)
    parser.set_defaults(handler=interpolate)
