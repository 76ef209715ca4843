import logging
import sys
from typing import Optional, Sequence

from app.cli.app import parse, run
from app.config import settings


class QuietFilter(logging.Filter):
    """With --quiet, keep only warnings and errors (batch workers are chatty at INFO)."""

    def __init__(self, quiet: bool):
        super().__init__()
        self.quiet = quiet

    def filter(self, record: logging.LogRecord) -> bool:
        return not self.quiet or record.levelno >= logging.WARNING


def configure_logging(quiet: bool = False, verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    # stdout carries solution files and listings
    logging.basicConfig(
        level=level,
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )
    for handler in logging.getLogger().handlers:
        handler.addFilter(QuietFilter(quiet))

    # Reduce noise from libraries
    logging.getLogger("networkx").setLevel(logging.WARNING)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse(argv)
    configure_logging(quiet=args.quiet, verbose=args.verbose)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
