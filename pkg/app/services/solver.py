"""Design solvers for the all-invest and exact-set targets, plus the dispatcher."""
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from app.config import settings
from app.core.errors import (
    EmptyDegreeSetError,
    GadgetError,
    InstanceError,
    NonIntervalDegreeSetError,
    SolverPreconditionError,
)
from app.core.models import (
    INF,
    AllInvest,
    CostMatrix,
    DegreeSet,
    DesignInstance,
    ExactSet,
    Pair,
    Shape,
    Solution,
    SolveOutcome,
    SolveStats,
    SolveStatus,
    StrategyProfile,
    is_finite,
    norm_pair,
)
from app.services.gadget import build_gadget, extract_modification, verify_gadget
from app.services.instances import greedy_direction, validate, verify_solution
from app.services.matching import min_cost_perfect_matching

logger = logging.getLogger(__name__)

SOLVER_CHOICES = ("auto", "gadget", "greedy", "oracle")


def _structural(reason: str, stats: SolveStats) -> SolveOutcome:
    logger.info(f"Structurally infeasible: {reason}")
    return SolveOutcome(SolveStatus.STRUCTURALLY_INFEASIBLE, reason=reason, stats=stats)


def finish(inst: DesignInstance, solution: Solution, stats: SolveStats) -> SolveOutcome:
    """Wrap a minimum-cost solution, comparing its cost against the budget."""
    if solution.modification_cost > inst.budget:
        logger.info(f"Minimum cost {solution.modification_cost} exceeds budget {inst.budget}")
        return SolveOutcome(
            SolveStatus.INFEASIBLE_WITHIN_BUDGET, min_cost=solution.modification_cost, stats=stats
        )
    return SolveOutcome(SolveStatus.FEASIBLE, solution=solution, stats=stats)


# ──────────────────────── Target: all ────────────────────────

def solve_all(inst: DesignInstance, paranoid: bool = False) -> SolveOutcome:
    if not isinstance(inst.target, AllInvest):
        raise SolverPreconditionError(f"solve_all needs the all target, got {inst.target.describe()}")
    stats = SolveStats(solver="gadget")

    try:
        gg = build_gadget(inst)
    except EmptyDegreeSetError as e:
        return _structural(str(e), stats)
    except NonIntervalDegreeSetError as e:
        raise SolverPreconditionError(str(e)) from e

    stats.gadget_nodes = len(gg.nodes)
    stats.gadget_edges = len(gg.edges)
    if paranoid:
        violations = verify_gadget(gg)
        if violations:
            raise GadgetError(f"gadget self-check failed: {'; '.join(violations)}", -1)

    started = time.perf_counter()
    matching = min_cost_perfect_matching(gg.as_weighted())
    stats.matching_seconds = time.perf_counter() - started
    logger.info(f"Matching on {stats.gadget_nodes} nodes took {stats.matching_seconds:.3f}s")

    if matching is None:
        return _structural("no perfect matching in the gadget: no modification meets every degree set", stats)

    modification = extract_modification(gg, matching)
    solution = Solution.from_edges(inst, modification.edges, StrategyProfile.everyone(inst.n))
    if solution.modification_cost != modification.cost:
        raise GadgetError(
            f"extracted cost {modification.cost} differs from the edge-set cost {solution.modification_cost}", -1
        )
    return finish(inst, solution, stats)


# ──────────────────────── Target: exact set ────────────────────────

@dataclass(frozen=True)
class PhaseOne:
    toggles: frozenset[Pair]  # cross pairs between S and V \ S
    cost: Fraction
    blocked: Optional[int] = None  # player that can be pushed out of D neither way


def _cheapest(candidates: list[tuple], count: int) -> Optional[list[tuple]]:
    finite = sorted(c for c in candidates if is_finite(c[0]))
    return finite[:count] if len(finite) >= count else None


def phase_one(inst: DesignInstance, members: frozenset[int]) -> PhaseOne:
    """Push every non-member's investing-neighbour count out of its degree set at minimum cost.

    Each cross pair touches exactly one non-member's constraint, so players are handled
    independently: either drop the count to L-1 by removals or raise it to R+1 by additions.
    """
    n = inst.n
    graph = inst.graph
    toggles: set[Pair] = set()
    total = Fraction(0)

    for i in range(n):
        if i in members:
            continue
        d = inst.degree_sets[i].clamped(n)
        present = [j for j in sorted(members) if graph.has_edge(i, j)]
        k = len(present)
        if k not in d:
            continue
        lower, upper = d.lower, d.upper

        removal = None
        if lower >= 1:
            removal = _cheapest([(inst.pair_cost(i, j), j) for j in present], k - lower + 1)
        addition = None
        if upper + 1 <= len(members):
            absent = [j for j in sorted(members) if j != i and not graph.has_edge(i, j)]
            addition = _cheapest([(inst.pair_cost(i, j), j) for j in absent], upper + 1 - k)

        if removal is None and addition is None:
            logger.debug(f"Phase 1: player {i} is stuck at count {k} in [{lower}, {upper}]")
            return PhaseOne(frozenset(toggles), total, blocked=i)
        removal_cost = sum((c for c, _ in removal), Fraction(0)) if removal is not None else INF
        addition_cost = sum((c for c, _ in addition), Fraction(0)) if addition is not None else INF
        # Ties go to removal
        chosen, cost = (removal, removal_cost) if removal_cost <= addition_cost else (addition, addition_cost)
        toggles.update(norm_pair(i, j) for _, j in chosen)
        total += cost
        logger.debug(f"Phase 1: player {i} count {k} -> {'removal' if chosen is removal else 'addition'} at cost {cost}")

    return PhaseOne(frozenset(toggles), total)


def member_subinstance(inst: DesignInstance, members: frozenset[int]) -> tuple[DesignInstance, tuple[int, ...]]:
    """G'[S] relabelled 0..|S|-1 with clamped degree sets, all-invest target and no budget."""
    sub_graph, order = inst.graph.induced(members)
    m = len(order)
    degree_sets = tuple(
        DegreeSet(frozenset(z for z in inst.degree_sets[v].members if z < m), m) for v in order
    )
    overrides = {
        (a, b): inst.pair_cost(order[a], order[b]) for a in range(m) for b in range(a + 1, m)
    }
    sub = DesignInstance(
        graph=sub_graph,
        degree_sets=degree_sets,
        costs=CostMatrix(m, overrides),
        budget=INF,
        target=AllInvest(),
    )
    return sub, order


def combine(
    inst: DesignInstance,
    members: frozenset[int],
    first: PhaseOne,
    order: tuple[int, ...],
    inner_edges: frozenset[Pair],
) -> Solution:
    """Final edge set: G' with the phase-one toggles, intra-S edges replaced by `inner_edges`."""
    outside = {e for e in inst.graph.edges if not (e[0] in members and e[1] in members)}
    outside ^= first.toggles
    inside = {norm_pair(order[a], order[b]) for a, b in inner_edges}
    return Solution.from_edges(inst, outside | inside, StrategyProfile.from_set(inst.n, members))


def solve_exact_set(inst: DesignInstance, paranoid: bool = False) -> SolveOutcome:
    target = inst.target
    if not isinstance(target, ExactSet):
        raise SolverPreconditionError(f"solve_exact_set needs an exact-set target, got {target.describe()}")
    if not inst.has_interval_sets:
        raise SolverPreconditionError("solve_exact_set needs interval degree sets")
    members = target.members

    first = phase_one(inst, members)
    if first.blocked is not None:
        i = first.blocked
        return _structural(f"player {i} outside S cannot be moved out of its degree set", SolveStats(solver="exact_set"))

    sub, order = member_subinstance(inst, members)
    inner = solve_all(sub, paranoid=paranoid)
    stats = inner.stats
    stats.solver = "exact_set"
    stats.phase1_cost = first.cost
    if inner.status == SolveStatus.STRUCTURALLY_INFEASIBLE:
        return _structural(f"inside S: {inner.reason}", stats)

    solution = combine(inst, members, first, order, inner.solution.final_edges)
    logger.info(f"Exact-set solve: phase 1 cost {first.cost}, phase 2 cost {inner.solution.modification_cost}")
    return finish(inst, solution, stats)


# ──────────────────────── Dispatch ────────────────────────

def route(inst: DesignInstance, solver: str = "auto") -> str:
    """Name of the solver path `solve` takes for this instance."""
    if solver == "oracle":
        return "oracle"
    if solver == "greedy":
        shape = greedy_direction(inst)
        if shape is None:
            raise SolverPreconditionError("greedy solver does not apply to this instance")
        return "greedy_convex" if shape == Shape.CONVEX else "greedy_concave"
    polynomial = inst.has_interval_sets and isinstance(inst.target, (AllInvest, ExactSet))
    if solver == "gadget":
        if not polynomial:
            raise SolverPreconditionError(
                "gadget solver needs interval degree sets and an all / exact-set target"
            )
    elif solver != "auto":
        raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVER_CHOICES)}")
    if not polynomial:
        return "oracle"
    return "gadget" if isinstance(inst.target, AllInvest) else "exact_set"


def solve(
    inst: DesignInstance,
    solver: str = "auto",
    oracle_limit: Optional[int] = None,
    paranoid: Optional[bool] = None,
) -> SolveOutcome:
    from app.services import greedy, oracle

    paranoid = settings.paranoid if paranoid is None else paranoid
    path = route(inst, solver)
    report = validate(inst, solver=None if path == "oracle" else ("greedy" if path.startswith("greedy") else path))
    if not report.ok:
        raise InstanceError("invalid instance", report.errors)

    logger.info(f"Solving {inst.n}-player instance (target {inst.target.describe()}) with {path}")
    if path == "gadget":
        outcome = solve_all(inst, paranoid=paranoid)
    elif path == "exact_set":
        outcome = solve_exact_set(inst, paranoid=paranoid)
    elif path == "greedy_convex":
        outcome = greedy.solve_unit_convex_fast(inst)
    elif path == "greedy_concave":
        outcome = greedy.solve_unit_concave_fast(inst)
    else:
        outcome = oracle.solve_oracle(inst, limit=oracle_limit)

    if paranoid and outcome.solution is not None:
        check = verify_solution(inst, outcome.solution)
        if not check.ok:
            raise InstanceError("solver output failed verification", check.failures)
    return outcome
