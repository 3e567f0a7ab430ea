import argparse
import logging

from weilforge.commands import deps
from weilforge.core.config import settings
from weilforge.core.errors import EXIT_OK, EXIT_VERIFY_FAILED
from weilforge.services import connection_solver, jetfile, polarization_solver
from weilforge.services.connection_solver import ConnectionSolution
from weilforge.services.kahler import verify_kahlerian
from weilforge.services.polarization_solver import PolarizationSolution
from weilforge.utils.checks import ValidationResult, failed, first_failure, passed

logger = logging.getLogger(__name__)

NAME = "verify"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="re-run every residual check on saved files")
    parser.add_argument("--solution", "-s", required=True)
    parser.add_argument("--polarization", "-p", default=None)
    deps.add_output(parser)
    parser.set_defaults(handler=run)


def _small(name: str, value: float, tolerance: float) -> ValidationResult:
    if value > tolerance:
        return failed(f"{name}_residual", value=value, tolerance=tolerance)
    return passed(value=value)


def solution_checks(solution: ConnectionSolution) -> dict[str, ValidationResult]:
    tolerance = 0.0 if solution.field.exact else settings.tolerance
    reality = connection_solver.reality_residual(solution)
    return {
        "kahlerian": verify_kahlerian(solution.gamma),
        "reduction": connection_solver.reduction_identity(solution),
        "flatness": _small(
            "flatness",
            connection_solver.flatness_residual(solution)["max_certified"],
            tolerance,
        ),
        "linearity": _small(
            "linearity", connection_solver.linearity_residual(solution), tolerance
        ),
        "d2_identity": _small(
            "d2_identity", connection_solver.d2_identity_residual(solution), tolerance
        ),
        "reality": _small("reality", max(reality.values(), default=0.0), tolerance),
        "weakly_hodge": connection_solver.weakly_hodge_audit(solution),
        "iota_parity": connection_solver.iota_parity_check(solution),
    }


def _hodge_type(polarization: PolarizationSolution) -> ValidationResult:
    for k, part in sorted(polarization.omega.items()):
        for m in part.support():
            if m.hodge != (1, 1) or m.augmentation_degree != k:
                return failed("hodge_type_violated", order=k, monomial=str(m))
    return passed(orders=sorted(polarization.omega))


def polarization_checks(polarization: PolarizationSolution) -> dict[str, ValidationResult]:
    tolerance = 0.0 if polarization.connection.field.exact else settings.tolerance
    omega = polarization.total()
    return {
        "hodge_type": _hodge_type(polarization),
        "holomorphy": _small(
            "holomorphy",
            polarization_solver.holomorphy_residual(polarization)["max_certified"],
            tolerance,
        ),
        "omega_reality": _small(
            "omega_reality", (omega.twisted_real_structure() - omega).norm(), tolerance
        ),
        "positivity": polarization_solver.positivity_check(polarization),
    }


def run(args: argparse.Namespace) -> int:
    solution = deps.load_solution(args.solution)
    checks = solution_checks(solution)
    if args.polarization:
        polarization = deps.load_polarization(args.polarization, solution)
        checks.update(polarization_checks(polarization))
    failure = first_failure(checks)
    report = {
        "ok": failure is None,
        "first_failure": failure,
        "checks": {name: result.as_dict() for name, result in checks.items()},
    }
    if failure is not None:
        logger.warning("verification failed: %s", failure)
    deps.emit(
        jetfile.report_file(solution.dim, solution.order, deps.jsonable(report)), args
    )
    return EXIT_OK if failure is None else EXIT_VERIFY_FAILED
