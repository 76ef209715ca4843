import argparse
import json
import logging
from pathlib import Path

from app.cli.handlers.common import EXIT_INFEASIBLE, EXIT_OK
from app.core.storage import format_rational, load_instance, read_solution
from app.services.instances import verify_solution

logger = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("verify", help="check a solution file against its instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--solution", type=Path, required=True)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    sol = read_solution(args.solution.read_text(encoding="utf-8"), inst.n)
    report = verify_solution(inst, sol)

    doc = {
        "ok": report.ok,
        "recomputed_cost": None if report.recomputed_cost is None else format_rational(report.recomputed_cost),
        "failures": report.failures,
    }
    print(json.dumps(doc, indent=2))
    if report.ok:
        logger.info(f"{args.solution} verifies against {args.instance}")
        return EXIT_OK
    logger.info(f"{args.solution}: {len(report.failures)} failure(s)")
    return EXIT_INFEASIBLE
