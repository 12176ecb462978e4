"""
CLI Router
Combines all subcommand modules and maps failures to exit codes.

Exit codes: 0 success, 1 runtime failure, 2 usage error (bad flag, invalid
range, missing input file, a layer reference the network cannot satisfy). Failures print one JSON line on stderr:
{"error": <kind>, "message": <text>}.
"""

import argparse
import json
import sys
from typing import List, NoReturn, Optional

from layerrecon import __version__
from layerrecon.cli.commands import centrality, compare, convert, evaluate, reconstruct, sweeps
from layerrecon.cli.commands.common import common_parser
from layerrecon.config import settings
from layerrecon.core.exceptions import LayerReconError, UsageError
from layerrecon.logger import get_logger

logger = get_logger("cli")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def emit_error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


class JsonArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors are one machine-readable line."""

    def error(self, message: str) -> NoReturn:
        emit_error("usage", f"{self.prog}: {message}")
        sys.exit(EXIT_USAGE)


def build_parser() -> JsonArgumentParser:
    parser = JsonArgumentParser(
        prog=settings.APP_NAME,
        description="Reconstruct a partially observed layer of a multilayer network from similar layers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>", required=True)
    parent = common_parser()

    # Data
    convert.register(subparsers, parent)

    # Layer similarity
    centrality.register(subparsers, parent)
    compare.register(subparsers, parent)

    # Reconstruction & evaluation
    reconstruct.register(subparsers, parent)
    evaluate.register(subparsers, parent)

    # Experiment sweeps
    sweeps.register(subparsers, parent)
    return parser


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run the subcommand and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    for warn in settings.validate_critical():
        logger.warning(warn)

    try:
        args.handler(args)
    except LayerReconError as e:
        emit_error(type(e).__name__, str(e))
        return EXIT_RUNTIME
    except UsageError as e:
        emit_error("usage", str(e))
        return EXIT_USAGE
    except (FileNotFoundError, IsADirectoryError) as e:
        emit_error("usage", f"{e.strerror}: {e.filename}")
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"{args.command} failed")
        emit_error(type(e).__name__, str(e))
        return EXIT_RUNTIME
    return EXIT_OK
