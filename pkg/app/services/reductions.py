"""Instance generators from classic NP-hard problems, with certificate reconstruction.

Node layouts (H has m nodes, labelled 0..m-1 in every generated instance):

* independent set: u = m, u_hat = m + 1
* clique: V' = m .. m + m*k - 1, a clique of m*k nodes
* vertex cover: u_e = m .. m + |E_H| - 1 in sorted edge order, then w
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

import networkx as nx

from app.core.errors import WitnessError
from app.core.models import (
    INF,
    AllInvest,
    CostMatrix,
    DegreeSet,
    DesignInstance,
    Graph,
    Solution,
    SourceInstance,
    SourceKind,
    StrategyProfile,
    SupersetOf,
)

logger = logging.getLogger(__name__)


def _to_nx(h: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(h.n))
    graph.add_edges_from(h.sorted_edges())
    return graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi G(n, p), reproducible from `seed`."""
    sampled = nx.gnp_random_graph(n, p, seed=seed)
    return Graph.from_edges(n, sampled.edges())


def _metadata(source: SourceInstance, **extra) -> dict:
    return {
        "source": source.kind.value,
        "k": source.k,
        "h_nodes": source.graph.n,
        "h_edges": [list(e) for e in source.graph.sorted_edges()],
        **extra,
    }


# ──────────────────────── Generators ────────────────────────

def gen_independent_set(h: Graph, k: int) -> DesignInstance:
    """Concave superset target: u_hat invests iff H has an independent set of size k."""
    source = SourceInstance(SourceKind.INDEPENDENT_SET, h, k)
    m = h.n
    u, u_hat = m, m + 1
    n = m + 2
    edges = set(h.edges) | {(u, u_hat)} | {(v, u) for v in range(m)}
    degree_sets = [DegreeSet.of({0}, n) for _ in range(m)]
    degree_sets.append(DegreeSet.interval(0, k, n))
    degree_sets.append(DegreeSet.of({0}, n))
    return DesignInstance(
        graph=Graph.from_edges(n, edges),
        degree_sets=tuple(degree_sets),
        costs=CostMatrix.build(n, default_add=INF, default_remove=INF),
        budget=Fraction(0),
        target=SupersetOf(frozenset({u_hat})),
        metadata=_metadata(source, u=u, u_hat=u_hat),
    )


def gen_clique(h: Graph, k: int) -> DesignInstance:
    """Convex superset target over H plus a disjoint clique V' of m*k nodes."""
    source = SourceInstance(SourceKind.CLIQUE, h, k)
    m = h.n
    extra = list(range(m, m + m * k))
    n = m + m * k
    edges = set(h.edges) | set(combinations(extra, 2))
    # Literal bounds; the upper one exceeds n - 1 and is clamped by consumers (k = 0 gives lower -1)
    degree_set = DegreeSet.interval(max(m * k + k - 1, 0), m * k + m, n)
    return DesignInstance(
        graph=Graph.from_edges(n, edges),
        degree_sets=(degree_set,) * n,
        costs=CostMatrix.build(n, default_add=1, default_remove=0),
        budget=Fraction(m * k * k),
        target=SupersetOf(frozenset(extra)),
        metadata=_metadata(source, clique_nodes=extra),
    )


def gen_vertex_cover(h: Graph, k: int) -> DesignInstance:
    """General (non-interval) degree sets, all-invest target, removals free and additions prohibited."""
    source = SourceInstance(SourceKind.VERTEX_COVER, h, k)
    m = h.n
    h_edges = h.sorted_edges()
    edge_nodes = {e: m + idx for idx, e in enumerate(h_edges)}
    w = m + len(h_edges)
    n = w + 1
    edges = {(v, w) for v in range(m)}
    for (a, b), node in edge_nodes.items():
        edges.add((a, node))
        edges.add((b, node))

    degree_sets = [DegreeSet.of({0, h.degree(v) + 1}, n) for v in range(m)]
    degree_sets += [DegreeSet.of({1, 2}, n) for _ in h_edges]
    degree_sets.append(DegreeSet.interval(0, k, n))
    return DesignInstance(
        graph=Graph.from_edges(n, edges),
        degree_sets=tuple(degree_sets),
        costs=CostMatrix.build(n, default_add=INF, default_remove=0),
        budget=Fraction(0),
        target=AllInvest(),
        metadata=_metadata(
            source,
            w=w,
            edge_nodes=[[a, b, node] for (a, b), node in edge_nodes.items()],
            budget_note="removals are free, so every nonnegative budget is equivalent",
        ),
    )


GENERATORS = {
    SourceKind.INDEPENDENT_SET: gen_independent_set,
    SourceKind.CLIQUE: gen_clique,
    SourceKind.VERTEX_COVER: gen_vertex_cover,
}


def generate(source: SourceInstance) -> DesignInstance:
    inst = GENERATORS[source.kind](source.graph, source.k)
    logger.debug(f"Generated {source.kind.value} instance: {inst.n} players, {len(inst.graph.edges)} edges")
    return inst


# ──────────────────────── Source problems ────────────────────────

def _is_independent(h: Graph, nodes: Iterable[int]) -> bool:
    return not any(h.has_edge(a, b) for a, b in combinations(sorted(nodes), 2))


def _is_clique(h: Graph, nodes: Iterable[int]) -> bool:
    return all(h.has_edge(a, b) for a, b in combinations(sorted(nodes), 2))


def _is_cover(h: Graph, nodes: Iterable[int]) -> bool:
    chosen = set(nodes)
    return all(a in chosen or b in chosen for a, b in h.edges)


def max_clique_size(h: Graph) -> int:
    if h.n == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(_to_nx(h)))


def find_clique(h: Graph, k: int):
    """Some clique of exactly k nodes (sorted), or None."""
    if k == 0:
        return ()
    for clique in sorted(sorted(c) for c in nx.find_cliques(_to_nx(h))):
        if len(clique) >= k:
            return tuple(clique[:k])
    return None


def source_answer(source: SourceInstance) -> bool:
    """Exact yes/no answer of the source problem (exhaustive over maximal cliques)."""
    h, k = source.graph, source.k
    if source.kind == SourceKind.CLIQUE:
        return max_clique_size(h) >= k
    complement = Graph.from_edges(h.n, nx.complement(_to_nx(h)).edges())
    independence = max_clique_size(complement)
    if source.kind == SourceKind.INDEPENDENT_SET:
        return independence >= k
    return h.n - independence <= k


# ──────────────────────── Certificates ────────────────────────

def clique_witness_solution(inst: DesignInstance, clique: Iterable[int]) -> Solution:
    """E' plus the complete bipartite graph between V' and the clique; V' and the clique invest."""
    chosen = sorted(set(clique))
    extra = list(inst.metadata["clique_nodes"])
    final_edges = set(inst.graph.edges) | {(v, x) for v in chosen for x in extra}
    investing = StrategyProfile.from_set(inst.n, extra + chosen)
    return Solution.from_edges(inst, final_edges, investing)


def reconstruct_witness(source: SourceInstance, solution: Solution) -> frozenset[int]:
    """Read the source certificate off a design solution and check it in H."""
    h, k = source.graph, source.k
    m = h.n
    expected = {
        SourceKind.INDEPENDENT_SET: m + 2,
        SourceKind.CLIQUE: m + m * k,
        SourceKind.VERTEX_COVER: m + len(h.edges) + 1,
    }[source.kind]
    if solution.investing.n != expected:
        raise WitnessError(f"solution covers {solution.investing.n} players, the {source.kind.value} instance has {expected}")

    if source.kind == SourceKind.INDEPENDENT_SET:
        witness = frozenset(v for v in solution.investing.investing if v < m)
        if not _is_independent(h, witness) or len(witness) < k:
            raise WitnessError(f"investing H-nodes {sorted(witness)} are not an independent set of size {k}")
    elif source.kind == SourceKind.CLIQUE:
        extra = set(range(m, expected))
        witness = frozenset(
            v for a, b in solution.final_edges for v, other in ((a, b), (b, a)) if v < m and other in extra
        )
        if not _is_clique(h, witness) or len(witness) < k:
            raise WitnessError(f"H-neighbours of V' {sorted(witness)} are not a clique of size {k}")
    else:
        w = expected - 1
        witness = frozenset(v for v in range(m) if (v, w) in solution.final_edges)
        if not _is_cover(h, witness) or len(witness) > k:
            raise WitnessError(f"nodes still joined to w {sorted(witness)} are not a vertex cover of size {k}")

    logger.debug(f"{source.kind.value} certificate {sorted(witness)} verified")
    return witness


# ──────────────────────── Manifest ────────────────────────

def describe_graph(h: Graph, er: Optional[tuple[int, float]] = None) -> str:
    if er is not None:
        return f"G({er[0]}, {er[1]}) with {len(h.edges)} edges"
    return f"{h.n} nodes, edges {h.sorted_edges()}"


def manifest_row(source: SourceInstance, seed: Optional[int], file_name: str, description: str) -> dict:
    """One manifest entry; expected feasibility comes from solving the source problem exactly."""
    return {
        "file": file_name,
        "kind": source.kind.value,
        "h": description,
        "k": source.k,
        "seed": seed,
        "expected_feasible": source_answer(source),
    }
