"""Helpers shared by the command modules: loading inputs, fields, emitting output."""

import argparse
import logging
import math
import sys
from typing import Any

from weilforge.algebra.scalars import EXACT, ScalarField, float_field
from weilforge.core.config import settings
from weilforge.core.errors import JetFileError
from weilforge.services import jetfile
from weilforge.services.connection_solver import ConnectionSolution
from weilforge.services.examples import builtin_example
from weilforge.services.jetfile import JetFile, PayloadKind
from weilforge.services.jets import ChristoffelJet, MetricJet
from weilforge.services.kahler import levi_civita
from weilforge.services.polarization_solver import PolarizationSolution

logger = logging.getLogger(__name__)


def add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", default=None, help="write here instead of stdout")


def add_field(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", help="Gaussian rationals (default)")
    group.add_argument(
        "--float",
        dest="float_tol",
        nargs="?",
        const=-1.0,
        type=float,
        default=None,
        metavar="TOL",
        help="complex floats with zero threshold TOL (default WEILFORGE_TOL)",
    )


def field_from_args(args: argparse.Namespace) -> ScalarField:
    if getattr(args, "float_tol", None) is None:
        if getattr(args, "exact", False) or settings.exact:
            return EXACT
        return float_field(settings.tolerance)
    tolerance = args.float_tol if args.float_tol >= 0 else settings.tolerance
    return float_field(tolerance)


def order_from_args(args: argparse.Namespace) -> int:
    return settings.default_order if args.order is None else args.order


def load_connection_input(args: argparse.Namespace) -> tuple[ChristoffelJet, MetricJet | None]:
    if getattr(args, "example", None):
        metric = builtin_example(args.example, args.dim, order_from_args(args))
        return levi_civita(metric), metric
    if not args.input:
        raise JetFileError("either --input or --example is required")
    doc = jetfile.read_jet_file(args.input)
    if doc.kind is PayloadKind.METRIC:
        metric = jetfile.load_metric(doc)
        return levi_civita(metric), metric
    return jetfile.load_christoffel(doc), None


def load_metric(path: str) -> MetricJet:
    return jetfile.load_metric(jetfile.read_jet_file(path))


def load_solution(path: str) -> ConnectionSolution:
    return jetfile.load_solution(jetfile.read_jet_file(path))


def load_polarization(path: str, solution: ConnectionSolution) -> PolarizationSolution:
    return jetfile.load_polarization(jetfile.read_jet_file(path), solution)


def jsonable(value: Any) -> Any:
    """String keys, and "infinite" for infinities, so reports validate and dump."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [jsonable(item) for item in value]
    if isinstance(value, float) and math.isinf(value):
        return "infinite"
    return value


def emit(doc: JetFile, args: argparse.Namespace) -> None:
    text = jetfile.write_jet_file(doc, getattr(args, "output", None))
    if getattr(args, "output", None) is None:
        sys.stdout.write(text)
