from crud.basis_manager import load_basis, save_basis
from crud.graph_manager import load_graph, save_graph
from crud.partition_manager import read_partition, write_partition
from crud.point_manager import read_point
from crud.report_manager import write_update_delta
from lagrange.dynamic import insert_vertex
from utils.logging import get_logger

from commands.options import output_path, solver_config, workers

logger = get_logger(__name__)


def insert(args) -> int:
    """
    Add the point from a one-row CSV and write the updated graph, partition,
    basis and delta. A local basis keeps its stored outer radius.
    """
    g = load_graph(args.graph)
    p = read_partition(args.partition, g.n)
    b = load_basis(args.basis)
    point, point_id = read_point(args.point, id_column=args.id_column)

    g_new, p_new, b_new, delta = insert_vertex(
        g, p, b, point, args.status, g.metric,
        args.inner_radius, args.outer_radius, solver_config(args),
        point_id=args.id if args.id is not None else point_id, workers=workers(args),
    )

    out_dir = output_path(args, "updated")
    save_graph(g_new, out_dir / "graph")
    out_dir.mkdir(parents=True, exist_ok=True)
    write_partition(p_new, out_dir / "partition.csv")
    save_basis(b_new, out_dir / "basis")
    write_update_delta(delta, out_dir / "delta.json")

    print(f"inserted vertex {delta.new_vertex.index} ({delta.new_vertex.status}): "
          f"{len(delta.new_edges)} edges, {delta.affected_count} columns refreshed -> {out_dir}")
    return 0


def register(subparsers):
    parser = subparsers.add_parser("insert", help="Insert one point and refresh the basis")
    parser.add_argument("--graph", required=True)
    parser.add_argument("--partition", required=True)
    parser.add_argument("--basis", required=True)
    parser.add_argument("--point", required=True, help="CSV with one row of coordinates")
    parser.add_argument("--id-column", default="id")
    parser.add_argument("--status", choices=["known", "unknown"], required=True)
    parser.add_argument("--inner-radius", type=float, required=True)
    parser.add_argument("--outer-radius", type=float,
                        help="Must match the basis radius; defaults to it")
    parser.add_argument("--id", type=int, help="Vertex id for the new point, overrides the id column")
    parser.add_argument("--workers", type=int)
    parser.set_defaults(handler=insert)
