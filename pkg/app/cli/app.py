import argparse
import logging
import sys
from typing import Optional, Sequence

from app.cli.handlers import generate, psne, schema, solve, verify
from app.cli.handlers.common import EXIT_ERROR
from app.core.errors import BnpgError, InstanceError

logger = logging.getLogger(__name__)


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bnpg",
        description="Exact network design for binary networked public goods games.",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="only warnings and errors on stderr")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug output on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    # Register commands
    solve.register(sub)
    verify.register(sub)
    psne.register(sub)
    generate.register(sub)
    schema.register(sub)

    return parser


def run(args: argparse.Namespace) -> int:
    try:
        return args.handler(args)
    except InstanceError as e:
        logger.error(f"{args.command}: {e}")
        for line in e.diagnostics:
            print(line, file=sys.stderr)
        return EXIT_ERROR
    except BnpgError as e:
        logger.error(f"{args.command}: {e}")
        print(str(e), file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_ERROR


def parse(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    return create_parser().parse_args(argv)
