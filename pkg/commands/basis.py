import pandas as pd

from crud.basis_manager import load_basis, save_basis
from crud.graph_manager import load_graph
from crud.partition_manager import read_partition
from lagrange.assumptions import validate_assumptions
from lagrange.basis import basis_discrepancy, compute_basis, sparsity_ratio
from lagrange.exceptions import InvalidInputError
from lagrange.laplacian import normalized_laplacian
from lagrange.neighborhoods import neighborhoods
from utils.logging import get_logger

from commands.options import int_list, output_path, solver_config, workers

logger = get_logger(__name__)


def compute(args) -> int:
    """
    Compute the Lagrange basis, or the local basis when --outer-radius is given.
    """
    g = load_graph(args.graph)
    p = read_partition(args.partition, g.n)
    L = normalized_laplacian(g)

    if args.outer_radius is None:
        b = compute_basis(L, p, "global", solver_config(args), workers(args), g.graph_hash())
    else:
        nbhds = neighborhoods(g, p, args.outer_radius, dirichlet=args.dirichlet)
        if args.check_assumptions:
            report = validate_assumptions(g, p, nbhds)
            logger.info(f"Assumptions: {report.model_dump(include={'unknown_edges_ok', 'dirichlet_ok', 'edge_bound_ok'})}")
        b = compute_basis(L, p, nbhds, solver_config(args), workers(args), g.graph_hash())

    out_dir = save_basis(b, output_path(args, "basis"))
    print(f"basis: mode={b.mode} columns={b.column_count} nnz={b.matrix.nnz} "
          f"sparsity={sparsity_ratio(b):.4g} -> {out_dir}")
    return 0


def diff(args) -> int:
    """
    Per-center discrepancy between a Lagrange basis and a local basis.
    """
    full = load_basis(args.full)
    local = load_basis(args.local)
    if full.mode != "lagrange" or local.mode != "local":
        raise InvalidInputError("--full must be a Lagrange basis and --local a local basis")
    if full.graph_hash and local.graph_hash and full.graph_hash != local.graph_hash:
        raise InvalidInputError("Bases were computed on different graphs")

    centers = args.centers or local.centers.tolist()
    rows = []
    for v in centers:
        d = basis_discrepancy(full, local, v)
        rows.append({"center": d.center, "inside": d.inside, "outside": d.outside, "linf": d.linf})
    frame = pd.DataFrame(rows, columns=["center", "inside", "outside", "linf"])

    out_path = output_path(args, "discrepancy.csv")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out_path, index=False)
    print(f"discrepancy: centers={len(frame)} max_linf={frame['linf'].max():.6g} -> {out_path}")
    return 0


def register(subparsers):
    parser = subparsers.add_parser("basis", help="Lagrange and local Lagrange bases")
    commands = parser.add_subparsers(dest="basis_command", required=True)

    compute_parser = commands.add_parser("compute", help="Compute a basis")
    compute_parser.add_argument("--graph", required=True, help="Directory written by 'graph build'")
    compute_parser.add_argument("--partition", required=True, help="CSV vertex,status")
    compute_parser.add_argument("--outer-radius", type=float, help="Local basis with this ball radius")
    compute_parser.add_argument("--dirichlet", action="store_true",
                                help="Grow balls until every boundary vertex is known")
    compute_parser.add_argument("--check-assumptions", action="store_true")
    compute_parser.add_argument("--workers", type=int)
    compute_parser.set_defaults(handler=compute)

    diff_parser = commands.add_parser("diff", help="Compare a local basis with the Lagrange basis")
    diff_parser.add_argument("--full", required=True)
    diff_parser.add_argument("--local", required=True)
    diff_parser.add_argument("--centers", type=int_list)
    diff_parser.set_defaults(handler=diff)
