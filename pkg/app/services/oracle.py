"""Exhaustive ground-truth solver: every edge set, every profile of the target class."""
import heapq
import logging
from fractions import Fraction
from typing import Iterator, Optional

from app.config import settings
from app.core.errors import LimitExceededError
from app.core.models import (
    AllInvest,
    DesignInstance,
    ExactSet,
    Pair,
    Solution,
    SolveOutcome,
    SolveStats,
    SolveStatus,
    StrategyProfile,
    all_pairs,
    is_finite,
)

logger = logging.getLogger(__name__)


def _profile_key(mask: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if (mask >> i) & 1)


def target_profiles(inst: DesignInstance) -> list[int]:
    """Bitmasks of every investing set in the target class, lexicographic by sorted members."""
    n = inst.n
    target = inst.target
    if isinstance(target, AllInvest):
        masks = [(1 << n) - 1]
    elif isinstance(target, ExactSet):
        masks = [sum(1 << i for i in target.members)]
    else:
        masks = [m for m in range(1 << n) if target.contains(frozenset(_profile_key(m, n)), n)]
    return sorted(masks, key=lambda m: _profile_key(m, n))


def toggle_sets(inst: DesignInstance) -> Iterator[tuple[Fraction, tuple[Pair, ...]]]:
    """Subsets of finitely-priced pairs, lazily, in (cost, sorted toggles) order.

    A subset is reached from the subset without its last pair, which never costs more and
    is a lexicographic prefix of it, so a heap frontier pops subsets in exact order while
    holding only the children of what has been popped so far.
    """
    priced = [(pair, inst.pair_cost(*pair)) for pair in all_pairs(inst.n)]
    priced = [(pair, cost) for pair, cost in priced if is_finite(cost)]
    frontier: list[tuple[Fraction, tuple[Pair, ...], int]] = [(Fraction(0), (), -1)]
    while frontier:
        cost, toggles, last = heapq.heappop(frontier)
        yield cost, toggles
        for k in range(last + 1, len(priced)):
            pair, price = priced[k]
            heapq.heappush(frontier, (cost + price, toggles + (pair,), k))


def _equilibrium(masks: list[int], members: list[frozenset[int]], profiles: list[int]) -> Optional[int]:
    for profile in profiles:
        for i, adjacency in enumerate(masks):
            count = (adjacency & profile).bit_count()
            if ((profile >> i) & 1) != (count in members[i]):
                break
        else:
            return profile
    return None


def solve_oracle(inst: DesignInstance, limit: Optional[int] = None) -> SolveOutcome:
    """Cheapest modification (ties: lexicographically smallest toggle list) with an equilibrium in the target.

    The investing set reported is the lexicographically smallest one in the target class.
    """
    cap = settings.oracle_limit if limit is None else limit
    n = inst.n
    if n > cap:
        raise LimitExceededError("oracle", n, cap)

    stats = SolveStats(solver="oracle")
    profiles = target_profiles(inst)
    members = [d.members for d in inst.degree_sets]
    base = [0] * n
    for i, j in inst.graph.edges:
        base[i] |= 1 << j
        base[j] |= 1 << i

    if not profiles:
        return SolveOutcome(SolveStatus.STRUCTURALLY_INFEASIBLE, reason="target class is empty", stats=stats)

    for cost, toggles in toggle_sets(inst):
        stats.oracle_expanded += 1
        masks = list(base)
        for i, j in toggles:
            masks[i] ^= 1 << j
            masks[j] ^= 1 << i
        profile = _equilibrium(masks, members, profiles)
        if profile is None:
            continue

        final_edges = inst.graph.edges.symmetric_difference(toggles)
        investing = StrategyProfile.from_set(n, _profile_key(profile, n))
        solution = Solution.from_edges(inst, final_edges, investing)
        logger.info(f"Oracle: minimum cost {cost} after {stats.oracle_expanded} edge sets")
        if cost > inst.budget:
            return SolveOutcome(SolveStatus.INFEASIBLE_WITHIN_BUDGET, min_cost=cost, stats=stats)
        return SolveOutcome(SolveStatus.FEASIBLE, solution=solution, stats=stats)

    logger.info(f"Oracle: no equilibrium in {inst.target.describe()} under any of {stats.oracle_expanded} edge sets")
    return SolveOutcome(
        SolveStatus.STRUCTURALLY_INFEASIBLE,
        reason=f"no modification of finite cost induces an equilibrium in target {inst.target.describe()}",
        stats=stats,
    )

