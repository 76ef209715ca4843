import logging
import time
from typing import Optional

import networkx as nx

from app.config import settings
from app.core.errors import LimitExceededError
from app.core.models import PerfectMatching, WeightedGraph, norm_pair

logger = logging.getLogger(__name__)


def min_cost_perfect_matching(g: WeightedGraph) -> Optional[PerfectMatching]:
    """Minimum-cost perfect matching on a general graph, or None when none exists.

    Runs networkx's blossom (max_weight_matching with maxcardinality=True) on the
    reflected weights W + 1 - w: among maximum-cardinality matchings that picks the
    cheapest one, and a maximum-cardinality matching is perfect iff one exists at all.
    Weights stay integral, so the dual updates are exact.
    """
    if g.node_count % 2:
        return None
    if g.node_count == 0:
        return PerfectMatching(frozenset(), 0)

    ceiling = 1 + max((w for _, _, w in g.weighted_edges), default=0)
    graph = nx.Graph()
    graph.add_nodes_from(range(g.node_count))
    graph.add_weighted_edges_from((u, v, ceiling - w) for u, v, w in g.weighted_edges)

    started = time.perf_counter()
    mate = nx.max_weight_matching(graph, maxcardinality=True, weight="weight")
    elapsed = time.perf_counter() - started
    logger.debug(f"Blossom on {g.node_count} nodes / {len(g.weighted_edges)} edges took {elapsed:.3f}s")

    if 2 * len(mate) != g.node_count:
        return None
    pairs = frozenset(norm_pair(u, v) for u, v in mate)
    return PerfectMatching(pairs, sum(g.weight[p] for p in pairs))


def brute_force_matching(g: WeightedGraph, limit: Optional[int] = None) -> Optional[PerfectMatching]:
    """Exhaustive pairing search; ties go to the lexicographically smallest pair list."""
    cap = settings.brute_matching_limit if limit is None else limit
    if g.node_count > cap:
        raise LimitExceededError("brute-force matching", g.node_count, cap)
    if g.node_count % 2:
        return None

    neighbors: list[list[tuple[int, int]]] = [[] for _ in range(g.node_count)]
    for (u, v), w in g.weight.items():
        neighbors[u].append((v, w))
        neighbors[v].append((u, w))
    for row in neighbors:
        row.sort()

    best: Optional[tuple[int, list[tuple[int, int]]]] = None
    chosen: list[tuple[int, int]] = []
    matched = [False] * g.node_count

    def extend(cost: int) -> None:
        nonlocal best
        if best is not None and cost >= best[0]:
            return
        u = next((v for v in range(g.node_count) if not matched[v]), None)
        if u is None:
            # Pairings are visited in lexicographic order, so only a strictly cheaper one replaces
            if best is None or cost < best[0]:
                best = (cost, list(chosen))
            return
        matched[u] = True
        for v, w in neighbors[u]:
            if v > u and not matched[v]:
                matched[v] = True
                chosen.append((u, v))
                extend(cost + w)
                chosen.pop()
                matched[v] = False
        matched[u] = False

    extend(0)
    if best is None:
        return None
    return PerfectMatching(frozenset(best[1]), best[0])


def matching_cost(g: WeightedGraph, pairs) -> int:
    return sum(g.weight[norm_pair(u, v)] for u, v in pairs)


def is_perfect_matching(g: WeightedGraph, pairs) -> bool:
    seen: set[int] = set()
    for u, v in pairs:
        if norm_pair(u, v) not in g.weight or u in seen or v in seen:
            return False
        seen.update((u, v))
    return len(seen) == g.node_count
