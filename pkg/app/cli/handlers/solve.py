import argparse
import logging
from pathlib import Path

from app.cli.handlers.common import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, emit
from app.config import settings
from app.core.errors import GadgetError
from app.core.models import DesignInstance, SolveOutcome
from app.core.storage import load_instance, write_outcome, write_text_atomic
from app.scheduler.batch import batch_exit_code, run_batch
from app.services.gadget import build_gadget, dump_gadget
from app.services.matching import min_cost_perfect_matching
from app.services.solver import SOLVER_CHOICES, member_subinstance, route, solve

logger = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("solve", help="solve a design instance (or a directory of them)")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", type=Path, help="instance JSON file")
    source.add_argument("--instance-dir", type=Path, help="solve every *.json in this directory")
    p.add_argument("--output", type=Path, help="solution file (default: stdout)")
    p.add_argument("--output-dir", type=Path, help="solution directory for --instance-dir")
    p.add_argument("--solver", choices=SOLVER_CHOICES, default="auto")
    p.add_argument("--limit", type=int, default=None, help=f"oracle node limit (default {settings.oracle_limit})")
    p.add_argument("--jobs", type=int, default=settings.jobs, help="parallel workers for --instance-dir")
    p.add_argument(
        "--paranoid",
        action=argparse.BooleanOptionalAction,
        default=settings.paranoid,
        help="self-check the gadget and verify every solution",
    )
    p.add_argument("--dump-gadget", type=Path, help="write the matching gadget as an annotated edge list")
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    if args.limit is not None and args.limit < 1:
        raise ValueError("--limit must be positive")
    if args.instance_dir is not None:
        return _handle_batch(args)

    inst = load_instance(args.instance)
    logger.info(f"Loaded {args.instance}: {inst.n} players, {len(inst.graph.edges)} edges, target {inst.target.describe()}")
    outcome = solve(inst, solver=args.solver, oracle_limit=args.limit, paranoid=args.paranoid)
    _log_stats(outcome)
    if args.dump_gadget is not None:
        _dump(inst, args.solver, args.dump_gadget)

    emit(write_outcome(outcome), args.output)
    return EXIT_OK if outcome.is_feasible else EXIT_INFEASIBLE


def _handle_batch(args: argparse.Namespace) -> int:
    if args.output_dir is None:
        raise ValueError("--instance-dir needs --output-dir")
    if args.jobs < 1:
        raise ValueError("--jobs must be positive")
    results = run_batch(args.instance_dir, args.output_dir, args.solver, args.limit, args.paranoid, args.jobs)
    for result in results:
        print(f"{result.name}\t{result.status}", flush=True)
    return batch_exit_code(results) if results else EXIT_ERROR


def _log_stats(outcome: SolveOutcome) -> None:
    stats = outcome.stats
    line = f"status={outcome.status.value} solver={stats.solver}"
    if stats.gadget_nodes:
        line += f" gadget_nodes={stats.gadget_nodes} gadget_edges={stats.gadget_edges} matching_seconds={stats.matching_seconds:.3f}"
    if stats.oracle_expanded:
        line += f" oracle_expanded={stats.oracle_expanded}"
    if stats.phase1_cost is not None:
        line += f" phase1_cost={stats.phase1_cost}"
    logger.info(line)


def _dump(inst: DesignInstance, solver: str, path: Path) -> None:
    path_name = route(inst, solver)
    if path_name == "gadget":
        target = inst
    elif path_name == "exact_set":
        target, _ = member_subinstance(inst, inst.target.members)
    else:
        logger.warning(f"No gadget on the {path_name} path; --dump-gadget ignored")
        return
    try:
        gg = build_gadget(target)
    except GadgetError as e:
        logger.warning(f"Cannot dump gadget: {e}")
        return
    matching = min_cost_perfect_matching(gg.as_weighted())
    write_text_atomic(path, dump_gadget(gg, matching))
    logger.info(f"Gadget written to {path}")
