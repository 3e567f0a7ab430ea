import argparse
import logging

from weilforge.commands import deps
from weilforge.services import jetfile
from weilforge.services.estimates import estimate

logger = logging.getLogger(__name__)

NAME = "estimate-radius"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="norm tables, bounds and convergence radius")
    parser.add_argument("--solution", "-s", required=True)
    parser.add_argument("--polarization", "-p", default=None)
    deps.add_output(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    solution = deps.load_solution(args.solution)
    polarization = (
        deps.load_polarization(args.polarization, solution) if args.polarization else None
    )
    report = estimate(solution, polarization)
    deps.emit(
        jetfile.report_file(solution.dim, solution.order, deps.jsonable(report.as_dict())),
        args,
    )
    return 0
