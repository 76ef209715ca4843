import argparse
import json
import logging
from pathlib import Path

from app.cli.handlers.common import EXIT_OK
from app.core.models import parse_target
from app.core.storage import load_instance
from app.services.game import enumerate_psne

logger = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("psne", help="list the pure equilibria of an instance's current graph")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--class", dest="target_class", help="only equilibria in this class (all | exact:S | superset:S | atleast:r)")
    p.add_argument("--limit", type=int, default=None, help="largest player count to enumerate")
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    target = parse_target(args.target_class) if args.target_class else None

    profiles = enumerate_psne(inst.graph, inst.degree_sets, limit=args.limit)
    shown = 0
    for profile in profiles:
        if target is not None and not target.contains(profile.investing, inst.n):
            continue
        print(json.dumps(profile.sorted_investing()))
        shown += 1
    logger.info(f"{shown} of {len(profiles)} equilibria listed")
    return EXIT_OK
