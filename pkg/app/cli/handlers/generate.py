import argparse
import logging
from pathlib import Path

from pydantic import ValidationError

from app.cli.handlers.common import EXIT_OK, emit
from app.config import settings
from app.core.errors import InstanceParseError
from app.core.models import Graph, SourceInstance, SourceKind
from app.core.schemas import GraphFile
from app.core.storage import update_manifest, write_instance
from app.services.reductions import describe_graph, generate, manifest_row, random_graph

logger = logging.getLogger(__name__)


def register(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("generate", help="build a design instance from an NP-hard source problem")
    p.add_argument("--kind", choices=[k.value for k in SourceKind], required=True)
    graph = p.add_mutually_exclusive_group(required=True)
    graph.add_argument("--graph", type=Path, help='source graph file {"n": .., "edges": [[i, j], ..]}')
    graph.add_argument("--er", nargs=2, metavar=("N", "P"), help="Erdős–Rényi source graph G(N, P)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=settings.default_seed)
    p.add_argument("--output", type=Path, help="instance file (default: stdout)")
    p.add_argument("--manifest", type=Path, help="JSON manifest to add a row to")
    p.set_defaults(handler=handle)


def load_source_graph(path: Path) -> Graph:
    try:
        doc = GraphFile.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise InstanceParseError(e.errors()[0].get("msg", str(e)), str(path)) from e
    try:
        return Graph.from_edges(doc.n, doc.edges)
    except ValueError as e:
        raise InstanceParseError(str(e), f"{path}: edges") from e


def handle(args: argparse.Namespace) -> int:
    kind = SourceKind(args.kind)
    er = None
    if args.er is not None:
        er = (int(args.er[0]), float(args.er[1]))
        if er[0] < 0 or not 0 <= er[1] <= 1:
            raise ValueError("--er needs N >= 0 and 0 <= P <= 1")
        h = random_graph(er[0], er[1], args.seed)
    else:
        h = load_source_graph(args.graph)

    source = SourceInstance(kind, h, args.k)
    inst = generate(source)
    emit(write_instance(inst), args.output)
    logger.info(f"Generated {kind.value} instance with {inst.n} players from {describe_graph(h, er)}, k={args.k}")

    if args.manifest is not None:
        name = args.output.name if args.output is not None else "-"
        update_manifest(args.manifest, [manifest_row(source, args.seed, name, describe_graph(h, er))])
    return EXIT_OK
