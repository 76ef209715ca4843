"""Unit-cost fast paths for exact-set targets with convex or concave degree sets.

Phase 1 is shared with the two-phase solver. Inside S only one direction of change can
help: convex players need more investing neighbours (add edges), concave players need
fewer (remove edges). Each such edit fixes at most two players, so the minimum edit count
is T - a where T is the total shortfall and a the largest number of edits that fix two
players at once. That maximum is a capacity-bounded pairing, found as an ordinary
maximum-cardinality matching after splitting every player into one copy per unit of
shortfall.
"""
import logging

import networkx as nx

from app.core.errors import SolverPreconditionError
from app.core.models import DesignInstance, Graph, Pair, Shape, SolveOutcome, SolveStats, SolveStatus, norm_pair
from app.services.game import threshold
from app.services.instances import greedy_applies
from app.services.solver import combine, finish, member_subinstance, phase_one

logger = logging.getLogger(__name__)


def _is_copy(node) -> bool:
    return node is not None and node[0] == "copy"


def max_pairing(capacity: dict[int, int], candidates: list[Pair]) -> list[Pair]:
    """Largest set of candidate pairs using node v at most capacity[v] times.

    Node v becomes capacity[v] copies; each candidate pair (u, v) becomes a path
    u-copy / a_uv / b_uv / v-copy. A maximum matching then uses both outer edges of a
    path exactly for the chosen pairs.
    """
    graph = nx.Graph()
    for v, cap in capacity.items():
        graph.add_nodes_from(("copy", v, c) for c in range(cap))
    for u, v in candidates:
        a, b = ("a", u, v), ("b", u, v)
        graph.add_edge(a, b)
        for c in range(capacity[u]):
            graph.add_edge(a, ("copy", u, c))
        for c in range(capacity[v]):
            graph.add_edge(b, ("copy", v, c))

    matching = nx.max_weight_matching(graph, maxcardinality=True)
    mate = {}
    for x, y in matching:
        mate[x] = y
        mate[y] = x
    chosen = [
        (u, v) for u, v in candidates if _is_copy(mate.get(("a", u, v))) and _is_copy(mate.get(("b", u, v)))
    ]
    return sorted(chosen)


def fill_shortfall(graph: Graph, shortfall: dict[int, int], add: bool) -> tuple[list[Pair], int]:
    """Pair up short players, then complete each remaining shortfall one-sidedly.

    `add` selects the direction: new edges between non-adjacent players (convex) or
    deleted edges between adjacent ones (concave). Returns the edited pairs and the
    pairing size.
    """
    short = sorted(v for v, s in shortfall.items() if s > 0)
    candidates = [
        (u, v)
        for a, u in enumerate(short)
        for v in short[a + 1:]
        if graph.has_edge(u, v) != add
    ]
    paired = max_pairing({v: shortfall[v] for v in short}, candidates)

    edited: set[Pair] = set(paired)
    remaining = dict(shortfall)
    for u, v in paired:
        remaining[u] -= 1
        remaining[v] -= 1

    for v in short:
        partners = (
            w for w in range(graph.n)
            if w != v and graph.has_edge(v, w) != add and norm_pair(v, w) not in edited
        )
        for _ in range(remaining[v]):
            w = next(partners, None)
            if w is None:
                raise SolverPreconditionError(f"player {v} cannot cover its shortfall inside S")
            edited.add(norm_pair(v, w))
            remaining[w] = remaining.get(w, 0) - 1
        remaining[v] = 0

    logger.debug(f"Paired {len(paired)} edits, {len(edited) - len(paired)} one-sided")
    return sorted(edited), len(paired)


def _solve_unit(inst: DesignInstance, shape: Shape, solver_name: str) -> SolveOutcome:
    if not greedy_applies(inst, shape):
        raise SolverPreconditionError(
            f"{solver_name} needs an exact-set target with {shape.value} target players and unit costs inside S"
        )
    members = inst.target.members
    stats = SolveStats(solver=solver_name)

    first = phase_one(inst, members)
    if first.blocked is not None:
        reason = f"player {first.blocked} outside S cannot be moved out of its degree set"
        return SolveOutcome(SolveStatus.STRUCTURALLY_INFEASIBLE, reason=reason, stats=stats)
    stats.phase1_cost = first.cost

    sub, order = member_subinstance(inst, members)
    shortfall: dict[int, int] = {}
    for v in range(sub.n):
        d = sub.degree_sets[v]
        if not d.members:
            reason = f"player {order[v]} has no reachable degree inside S"
            return SolveOutcome(SolveStatus.STRUCTURALLY_INFEASIBLE, reason=reason, stats=stats)
        degree = sub.graph.degree(v)
        gap = threshold(d, shape) - degree if shape == Shape.CONVEX else degree - threshold(d, shape)
        shortfall[v] = max(gap, 0)

    edited, paired = fill_shortfall(sub.graph, shortfall, add=shape == Shape.CONVEX)
    total = sum(shortfall.values())
    logger.info(f"{solver_name}: shortfall {total}, {paired} paired edits, {len(edited)} edits in all")

    inner = sub.graph.edges.symmetric_difference(edited)
    solution = combine(inst, members, first, order, frozenset(inner))
    return finish(inst, solution, stats)


def solve_unit_convex_fast(inst: DesignInstance) -> SolveOutcome:
    """Minimum edge additions inside S for upward-closed degree sets with unit addition cost."""
    return _solve_unit(inst, Shape.CONVEX, "greedy_convex")


def solve_unit_concave_fast(inst: DesignInstance) -> SolveOutcome:
    """Minimum edge removals inside S for downward-closed degree sets with unit removal cost."""
    return _solve_unit(inst, Shape.CONCAVE, "greedy_concave")
