import argparse
import json
import logging
import sys
from collections.abc import Sequence

from weilforge.commands import COMMANDS
from weilforge.core.config import settings
from weilforge.core.errors import EXIT_OK, EXIT_USAGE, WeilforgeError
from weilforge.core.logging import configure_logging

logger = logging.getLogger(__name__)


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Flat extended connections and polarizations from Kähler jets.",
    )
    parser.add_argument("--log-level", default=None, help="overrides WEILFORGE_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    configure_logging(args.log_level or settings.log_level)
    try:
        return args.handler(args)
    except WeilforgeError as err:
        logger.error("%s: %s", type(err).__name__, err)
        payload = {"error": type(err).__name__, "message": str(err), "details": err.details}
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
        return err.exit_code
    except (ValueError, IndexError) as err:
        logger.error("usage error: %s", err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
