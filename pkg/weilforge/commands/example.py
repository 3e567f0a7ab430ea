import argparse
import logging

from weilforge.commands import deps
from weilforge.services import jetfile
from weilforge.services.examples import ExampleName, builtin_example

logger = logging.getLogger(__name__)

NAME = "example"


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="write a built-in metric jet")
    parser.add_argument(
        "--name", required=True, help=", ".join(e.value for e in ExampleName)
    )
    parser.add_argument("--dim", type=int, default=1)
    parser.add_argument("--order", type=int, default=None)
    deps.add_output(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    metric = builtin_example(args.name, args.dim, deps.order_from_args(args))
    deps.emit(jetfile.metric_file(metric), args)
    return 0
