"""
Seed script: write the reduction fixtures and their manifest.
Run from the repository root:
    python -m app.seed [OUTPUT_DIR]
"""
import logging
import sys
from pathlib import Path

from app.core.models import Graph, SourceInstance, SourceKind
from app.core.storage import update_manifest, write_instance, write_text_atomic
from app.services.reductions import describe_graph, generate, manifest_row, random_graph

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = Path("fixtures/reductions")

# Small named source graphs: (name, n, edges)
TRIANGLE = ("triangle", 3, [(0, 1), (0, 2), (1, 2)])
SINGLE_EDGE = ("single_edge", 2, [(0, 1)])
TWO_ISOLATED = ("two_isolated", 2, [])
EMPTY3 = ("empty3", 3, [])
PATH4 = ("path4", 4, [(0, 1), (1, 2), (2, 3)])

# (kind, graph, k)
DEFAULT_NAMED_SOURCES = [
    (SourceKind.INDEPENDENT_SET, TRIANGLE, 1),
    (SourceKind.INDEPENDENT_SET, TRIANGLE, 2),
    (SourceKind.INDEPENDENT_SET, TWO_ISOLATED, 2),
    (SourceKind.INDEPENDENT_SET, PATH4, 2),
    (SourceKind.CLIQUE, TRIANGLE, 2),
    (SourceKind.CLIQUE, SINGLE_EDGE, 2),
    (SourceKind.CLIQUE, EMPTY3, 2),
    (SourceKind.VERTEX_COVER, SINGLE_EDGE, 1),
    (SourceKind.VERTEX_COVER, TRIANGLE, 1),
    (SourceKind.VERTEX_COVER, TRIANGLE, 2),
]

# (kind, n, p, k, seed) Erdős–Rényi sources
DEFAULT_RANDOM_SOURCES = [
    (SourceKind.INDEPENDENT_SET, 5, 0.5, 2, 11),
    (SourceKind.CLIQUE, 4, 0.6, 2, 3),
    (SourceKind.VERTEX_COVER, 4, 0.5, 2, 7),
]


def _write(output_dir: Path, file_name: str, source: SourceInstance, seed, description: str) -> dict:
    write_text_atomic(output_dir / file_name, write_instance(generate(source)))
    row = manifest_row(source, seed, file_name, description)
    logger.info(f"  [{source.kind.value}] {file_name} expected_feasible={row['expected_feasible']}")
    return row


def seed_fixtures(output_dir: Path = DEFAULT_OUTPUT_DIR) -> list[dict]:
    """Write every default fixture plus manifest.json; returns the manifest rows."""
    output_dir = Path(output_dir)
    logger.info(f"Seeding reduction fixtures into {output_dir}...")
    rows = []

    for kind, (name, n, edges), k in DEFAULT_NAMED_SOURCES:
        h = Graph.from_edges(n, edges)
        source = SourceInstance(kind, h, k)
        rows.append(_write(output_dir, f"{kind.value}_{name}_k{k}.json", source, None, describe_graph(h)))

    for kind, n, p, k, seed in DEFAULT_RANDOM_SOURCES:
        h = random_graph(n, p, seed)
        source = SourceInstance(kind, h, k)
        file_name = f"{kind.value}_er{n}_p{p}_k{k}_seed{seed}.json"
        rows.append(_write(output_dir, file_name, source, seed, describe_graph(h, (n, p))))

    update_manifest(output_dir / "manifest.json", rows)
    logger.info("Seeding complete!")
    return rows


if __name__ == "__main__":
    seed_fixtures(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUTPUT_DIR)
