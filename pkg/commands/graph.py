from crud.graph_manager import save_graph
from crud.point_manager import read_points
from experiments.sphere import fibonacci_sphere, min_separation
from lagrange.exceptions import InvalidInputError
from lagrange.graph import build_graph, rescale_to_unit_neighbor
from schemas import Metric, MetricKind
from utils.logging import get_logger

from commands.options import float_list, output_path

logger = get_logger(__name__)


def build(args) -> int:
    """
    Build a graph from a points CSV or a Fibonacci lattice and save it.
    """
    if args.fibonacci:
        pc = fibonacci_sphere(args.fibonacci)
    else:
        pc = read_points(args.points, id_column=args.id_column)

    metric = Metric(kind=MetricKind(args.metric), p=args.p, weights=args.weights)
    if args.inner_radius is not None:
        inner_radius = args.inner_radius
    elif args.inner_multiplier is not None:
        inner_radius = args.inner_multiplier * min_separation(pc, metric)
    else:
        raise InvalidInputError("Either --inner-radius or --inner-multiplier is required")

    g = build_graph(pc, metric, inner_radius)
    if args.rescale:
        g = rescale_to_unit_neighbor(g)

    out_dir = save_graph(g, output_path(args, "graph"))
    print(f"graph: n={g.n} edges={g.edge_count} theta={g.theta:.6g} rho_max={g.rho_max:.6g} -> {out_dir}")
    return 0


def register(subparsers):
    parser = subparsers.add_parser("graph", help="Graph construction")
    commands = parser.add_subparsers(dest="graph_command", required=True)

    build_parser = commands.add_parser("build", help="Build a graph from points")
    source = build_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--points", help="CSV with one row per point")
    source.add_argument("--fibonacci", type=int, help="Use N Fibonacci lattice points on the sphere")
    build_parser.add_argument("--id-column", default="id")
    build_parser.add_argument("--inner-radius", type=float)
    build_parser.add_argument("--inner-multiplier", type=float,
                              help="Inner radius as a multiple of the minimal separation")
    build_parser.add_argument("--metric", choices=[k.value for k in MetricKind], default="euclidean")
    build_parser.add_argument("--p", type=float, default=2.0)
    build_parser.add_argument("--weights", type=float_list)
    build_parser.add_argument("--rescale", action="store_true",
                              help="Rescale so every vertex has a neighbor within distance 1")
    build_parser.set_defaults(handler=build)
