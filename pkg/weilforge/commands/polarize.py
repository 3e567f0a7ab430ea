import argparse
import logging

from weilforge.commands import deps
from weilforge.services import jetfile, polarization_solver

logger = logging.getLogger(__name__)

NAME = "polarize"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="extend a parallel Kähler form to Ω")
    parser.add_argument("--input", "-i", required=True, help="metric jet file")
    parser.add_argument("--solution", "-s", required=True, help="solution file")
    parser.add_argument("--order", type=int, default=None)
    deps.add_output(parser)
    parser.set_defaults(handler=run)


def polarization_report(polarization: polarization_solver.PolarizationSolution) -> dict:
    reconstruction = polarization_solver.kahler_form_reconstruct(polarization)
    return {
        "holomorphy": polarization_solver.holomorphy_residual(polarization),
        "kahler_form": {
            "residuals": reconstruction["residuals"],
            "max_residual": reconstruction["max_residual"],
        },
        "positivity": polarization_solver.positivity_check(polarization).as_dict(),
    }


def run(args: argparse.Namespace) -> int:
    metric = deps.load_metric(args.input)
    solution = deps.load_solution(args.solution)
    polarization = polarization_solver.solve_polarization(solution, metric, args.order)
    report = deps.jsonable(polarization_report(polarization))
    deps.emit(jetfile.polarization_file(polarization, report), args)
    return 0
