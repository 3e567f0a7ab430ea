import argparse
import logging

from weilforge.commands import deps
from weilforge.services import connection_solver, jetfile
from weilforge.services.brute_force import brute_force_solve
from weilforge.services.estimates import measure_norms

logger = logging.getLogger(__name__)

NAME = "solve"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="solve the flat extended connection")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", "-i", help="metric or christoffel jet file")
    source.add_argument("--example", help="built-in example name instead of a file")
    parser.add_argument("--dim", type=int, default=1, help="dimension for --example")
    parser.add_argument("--order", type=int, default=None)
    parser.add_argument(
        "--brute-force",
        action="store_true",
        help="solve by exact elimination instead of the recursion (dim 1, small orders)",
    )
    deps.add_field(parser)
    deps.add_output(parser)
    parser.set_defaults(handler=run)


def solution_report(solution: connection_solver.ConnectionSolution) -> dict:
    return {
        "flatness": connection_solver.flatness_residual(solution),
        "linearity": connection_solver.linearity_residual(solution),
        "d2_identity": connection_solver.d2_identity_residual(solution),
        "reality": connection_solver.reality_residual(solution),
        "weakly_hodge": connection_solver.weakly_hodge_audit(solution).as_dict(),
        "iota_parity": connection_solver.iota_parity_check(solution).as_dict(),
        "reduction": connection_solver.reduction_identity(solution).as_dict(),
        "norms": measure_norms(solution),
    }


def run(args: argparse.Namespace) -> int:
    gamma, _ = deps.load_connection_input(args)
    order = deps.order_from_args(args)
    if args.brute_force:
        solution = brute_force_solve(gamma, order)
    else:
        solution = connection_solver.solve(gamma, order, deps.field_from_args(args))
    report = deps.jsonable(solution_report(solution))
    deps.emit(jetfile.solution_file(solution, report), args)
    return 0
