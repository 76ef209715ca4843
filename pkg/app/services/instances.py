import logging
from dataclasses import dataclass, field
from typing import Optional

from app.core.models import (
    AllInvest,
    AtLeast,
    DesignInstance,
    ExactSet,
    Graph,
    Shape,
    Solution,
    SupersetOf,
    is_finite,
)
from app.services.game import derive_degree_set, is_psne

logger = logging.getLogger(__name__)

# Solvers that only work on interval degree sets
POLYNOMIAL_SOLVERS = ("gadget", "sigmoid", "exact_set", "greedy")


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass
class VerificationReport:
    failures: list[str] = field(default_factory=list)
    recomputed_cost: object = None

    @property
    def ok(self) -> bool:
        return not self.failures


def validate(inst: DesignInstance, solver: Optional[str] = None) -> ValidationReport:
    """Structural checks plus the obvious infeasibility (an empty degree set)."""
    report = ValidationReport()
    n = inst.n

    if len(inst.degree_sets) != n:
        report.errors.append(f"{len(inst.degree_sets)} degree sets for {n} players")
        return report
    if inst.costs.n != n:
        report.errors.append(f"cost matrix covers {inst.costs.n} players, graph has {n}")
    if is_finite(inst.budget) and inst.budget < 0:
        report.errors.append(f"negative budget {inst.budget}")

    required = _required_investors(inst)
    for i, d in enumerate(inst.degree_sets):
        if d.n != n:
            report.errors.append(f"degree set of player {i} is defined for {d.n} players, not {n}")
        if not d.clamped(n).members:
            suffix = "" if not d.members else " after clamping"
            if i in required:
                report.errors.append(f"infeasible: empty degree set{suffix} (player {i})")
            else:
                report.warnings.append(f"empty degree set{suffix} (player {i}): the player never invests")
            continue
        if not d.in_range:
            report.warnings.append(f"degree set of player {i} clamped to 0..{n - 1}")
        if solver in POLYNOMIAL_SOLVERS and not d.clamped(n).is_interval:
            report.errors.append(f"non-interval degree set (player {i})")

    target = inst.target
    if isinstance(target, (ExactSet, SupersetOf)):
        stray = sorted(v for v in target.members if not 0 <= v < n)
        if stray:
            report.errors.append(f"target set mentions unknown players {stray}")
    if isinstance(target, AtLeast) and not 0 <= target.r <= n:
        report.errors.append(f"target r={target.r} outside [0, {n}]")

    if solver in POLYNOMIAL_SOLVERS and not isinstance(target, (AllInvest, ExactSet)):
        report.errors.append(f"{solver} solver handles only the all / exact-set targets, not {target.kind}")
    if solver == "greedy" and report.ok:
        _check_greedy_shapes(inst, report)

    if inst.utilities is not None:
        if len(inst.utilities) != n:
            report.errors.append(f"{len(inst.utilities)} utility tables for {n} players")
        else:
            for i, table in enumerate(inst.utilities):
                if table.n != n:
                    report.errors.append(f"utility table of player {i} has {len(table.values)} values, expected {n + 1}")
                elif derive_degree_set(table).members != inst.degree_sets[i].members:
                    report.errors.append(f"utility table of player {i} disagrees with its degree set")

    for message in report.warnings:
        logger.warning(message)
    return report


def _required_investors(inst: DesignInstance) -> frozenset[int]:
    """Players that invest in every profile of the target class."""
    target = inst.target
    if isinstance(target, AllInvest) or (isinstance(target, AtLeast) and target.r >= inst.n):
        return frozenset(range(inst.n))
    if isinstance(target, (ExactSet, SupersetOf)):
        return target.members
    return frozenset()


def greedy_applies(inst: DesignInstance, shape: Shape) -> bool:
    """Whether the unit-cost fast path of the given direction fits this instance.

    Convex: every target player's set is upward-closed and every absent pair inside S
    costs 1 to add. Concave: downward-closed sets and unit removal cost inside S.
    """
    if not isinstance(inst.target, ExactSet) or not inst.has_interval_sets:
        return False
    n = inst.n
    members = sorted(inst.target.members)
    clamped = [inst.degree_sets[i].clamped(n) for i in members]
    if any(not d.members for d in clamped):
        return False
    inside = [(i, j) for a, i in enumerate(members) for j in members[a + 1:]]
    if shape == Shape.CONVEX:
        return all(d.upper == n - 1 for d in clamped) and all(
            inst.pair_cost(i, j) == 1 for i, j in inside if not inst.graph.has_edge(i, j)
        )
    if shape == Shape.CONCAVE:
        return all(d.lower == 0 for d in clamped) and all(
            inst.pair_cost(i, j) == 1 for i, j in inside if inst.graph.has_edge(i, j)
        )
    return False


def greedy_direction(inst: DesignInstance) -> Optional[Shape]:
    """CONVEX / CONCAVE when a unit-cost fast path applies (convex checked first), else None."""
    for shape in (Shape.CONVEX, Shape.CONCAVE):
        if greedy_applies(inst, shape):
            return shape
    return None


def _check_greedy_shapes(inst: DesignInstance, report: ValidationReport) -> None:
    if not isinstance(inst.target, ExactSet):
        report.errors.append("greedy solver needs an exact-set target")
        return
    if greedy_direction(inst) is None:
        report.errors.append(
            "greedy solver needs all target players convex with unit addition costs, "
            "or all concave with unit removal costs"
        )


def verify_solution(inst: DesignInstance, sol: Solution) -> VerificationReport:
    report = VerificationReport()
    n = inst.n
    if sol.investing.n != n:
        report.failures.append(f"profile has {sol.investing.n} entries, instance has {n} players")
        return report

    try:
        final = Graph(n, sol.final_edges)
    except ValueError as e:
        report.failures.append(f"malformed edge set: {e}")
        return report

    if sol.added != sol.final_edges - inst.graph.edges or sol.removed != inst.graph.edges - sol.final_edges:
        report.failures.append("added/removed do not match the final edge set")

    recomputed = inst.cost_of(sol.final_edges)
    report.recomputed_cost = recomputed
    if not is_finite(recomputed):
        report.failures.append("prohibited modification (infinite cost)")
    else:
        if recomputed != sol.modification_cost:
            report.failures.append(f"cost mismatch: recorded {sol.modification_cost}, recomputed {recomputed}")
        if recomputed > inst.budget:
            report.failures.append(f"over budget: {recomputed} > {inst.budget}")

    psne = is_psne(final, inst.degree_sets, sol.investing)
    for i in psne.violations:
        side = "investing" if sol.investing.invest[i] else "non-investing"
        relation = "not in" if sol.investing.invest[i] else "in"
        report.failures.append(f"player {i} ({side}): count {psne.counts[i]} {relation} D_{i}")

    if not inst.target.contains(sol.investing.investing, n):
        report.failures.append(f"investing set {sol.investing.sorted_investing()} not in target {inst.target.describe()}")

    return report
