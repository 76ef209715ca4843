"""Seeded random instances for property checks and batch experiments."""
import logging
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from app.config import settings
from app.core.models import (
    INF,
    AllInvest,
    CostMatrix,
    DegreeSet,
    DesignInstance,
    ExactSet,
    Graph,
    TargetClass,
    WeightedGraph,
    all_pairs,
)

logger = logging.getLogger(__name__)

COST_PALETTE = (Fraction(0), Fraction(1), Fraction(2), INF)


def sample_graph(rng: np.random.Generator, n: int, p: Optional[float] = None) -> Graph:
    p = settings.er_edge_probability if p is None else p
    return Graph.from_edges(n, [pair for pair in all_pairs(n) if rng.random() < p])


def random_interval(rng: np.random.Generator, n: int) -> DegreeSet:
    lower, upper = sorted(int(v) for v in rng.integers(0, n, size=2))
    return DegreeSet.interval(lower, upper, n)


def random_costs(rng: np.random.Generator, n: int, palette: Sequence = COST_PALETTE) -> CostMatrix:
    entries = {pair: palette[int(rng.integers(len(palette)))] for pair in all_pairs(n)}
    return CostMatrix(n, entries)


def random_instance(
    rng: np.random.Generator,
    n: int,
    target: Optional[TargetClass] = None,
    budget=INF,
    p: Optional[float] = None,
) -> DesignInstance:
    """Interval degree sets, costs drawn from {0, 1, 2, inf}, all-invest target unless given."""
    return DesignInstance(
        graph=sample_graph(rng, n, p),
        degree_sets=tuple(random_interval(rng, n) for _ in range(n)),
        costs=random_costs(rng, n),
        budget=budget,
        target=AllInvest() if target is None else target,
    )


def random_members(rng: np.random.Generator, n: int, proper: bool = True) -> frozenset[int]:
    """Random nonempty S; a proper subset of V when `proper`."""
    high = n if proper else n + 1
    size = int(rng.integers(1, max(high, 2)))
    return frozenset(int(v) for v in rng.choice(n, size=size, replace=False))


def random_unit_instance(rng: np.random.Generator, n: int, convex: bool = True) -> DesignInstance:
    """Exact-set instance with upward-closed (or downward-closed) sets inside S and unit costs inside S.

    Players outside S get random intervals; cross pairs get palette costs.
    """
    members = random_members(rng, n)
    degree_sets = []
    for i in range(n):
        if i not in members:
            degree_sets.append(random_interval(rng, n))
            continue
        bound = int(rng.integers(0, n))
        degree_sets.append(DegreeSet.interval(bound, n - 1, n) if convex else DegreeSet.interval(0, bound, n))

    graph = sample_graph(rng, n)
    entries = {}
    for i, j in all_pairs(n):
        if i in members and j in members:
            present = graph.has_edge(i, j)
            # only the useful direction is priced at 1
            entries[(i, j)] = Fraction(1) if present != convex else INF
        else:
            entries[(i, j)] = COST_PALETTE[int(rng.integers(len(COST_PALETTE)))]
    return DesignInstance(
        graph=graph,
        degree_sets=tuple(degree_sets),
        costs=CostMatrix(n, entries),
        budget=INF,
        target=ExactSet(members),
    )


def random_weighted_graph(
    rng: np.random.Generator, node_count: int, density: Optional[float] = None, max_weight: int = 20
) -> WeightedGraph:
    density = float(rng.random()) if density is None else density
    edges = tuple(
        (u, v, int(rng.integers(0, max_weight + 1)))
        for u, v in all_pairs(node_count)
        if rng.random() < density
    )
    return WeightedGraph(node_count, edges)
