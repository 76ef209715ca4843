from fractions import Fraction
from itertools import combinations

import pytest

from app.core.errors import InstanceError, LimitExceededError, SolverPreconditionError
from app.core.models import (
    INF,
    AllInvest,
    AtLeast,
    DegreeSet,
    ExactSet,
    SolveStatus,
    SupersetOf,
    all_pairs,
    is_finite,
)
from app.services.instances import verify_solution
from app.services.oracle import solve_oracle, toggle_sets
from app.services.sampling import random_instance, random_members, random_unit_instance
from app.services.solver import phase_one, route, solve, solve_all, solve_exact_set
from tests.conftest import TRIANGLE_EDGES, make_instance


def _star(budget=2):
    # Center 0 with leaves 1 and 2; S = the leaves
    return make_instance(
        3, [(0, 1), (0, 2)], [{2}, {1}, {1}], budget=budget, target=ExactSet(frozenset({1, 2}))
    )


def _min_cost(outcome):
    if outcome.status == SolveStatus.FEASIBLE:
        return outcome.solution.modification_cost
    return outcome.min_cost


def _assert_same_outcome(a, b):
    assert a.status == b.status
    assert _min_cost(a) == _min_cost(b)


# ──────────────────────── Target: all ────────────────────────

def test_solve_all_adds_missing_edge():
    outcome = solve_all(make_instance(2, [], [{1}, {1}], budget=1))
    assert outcome.status == SolveStatus.FEASIBLE
    assert outcome.solution.added == frozenset({(0, 1)})
    assert outcome.solution.modification_cost == 1
    assert outcome.stats.solver == "gadget"
    assert outcome.stats.gadget_nodes == 4


def test_solve_all_reports_true_minimum_over_budget():
    inst = make_instance(2, [(0, 1)], [{0}, {0}], costs={(0, 1): 3}, budget=2)
    outcome = solve_all(inst)
    assert outcome.status == SolveStatus.INFEASIBLE_WITHIN_BUDGET
    assert outcome.min_cost == 3


def test_solve_all_keeps_a_satisfied_graph():
    inst = make_instance(4, [(0, 1), (1, 2), (2, 3)], [{1}, {2}, {1, 2}, {0, 1}], budget=0)
    outcome = solve_all(inst)
    assert outcome.status == SolveStatus.FEASIBLE
    assert outcome.solution.final_edges == inst.graph.edges
    assert outcome.solution.modification_cost == 0


def test_solve_all_structural_cases():
    empty = solve_all(make_instance(2, [], [{1}, set()]))
    assert empty.status == SolveStatus.STRUCTURALLY_INFEASIBLE
    assert "empty degree set" in empty.reason

    prohibited = solve_all(make_instance(2, [], [{1}, {1}], default_add=INF))
    assert prohibited.status == SolveStatus.STRUCTURALLY_INFEASIBLE


def test_solve_all_preconditions():
    with pytest.raises(SolverPreconditionError):
        solve_all(make_instance(3, [], [{0, 2}, {0}, {0}]))
    with pytest.raises(SolverPreconditionError):
        solve_all(_star())


# ──────────────────────── Target: exact set ────────────────────────

def test_star_exact_set():
    outcome = solve_exact_set(_star())
    assert outcome.status == SolveStatus.FEASIBLE
    sol = outcome.solution
    assert sol.modification_cost == 2
    assert sol.removed == frozenset({(0, 1)})
    assert sol.added == frozenset({(1, 2)})
    assert sol.investing.sorted_investing() == [1, 2]
    assert outcome.stats.phase1_cost == 1
    assert verify_solution(_star(), sol).ok


def test_exact_set_budget_covers_both_phases():
    outcome = solve_exact_set(_star(budget=1))
    assert outcome.status == SolveStatus.INFEASIBLE_WITHIN_BUDGET
    assert outcome.min_cost == 2


def test_phase_one_skips_players_already_outside():
    inst = make_instance(3, [(0, 1)], [{0, 1}, {0, 1}, {1, 2}], target=ExactSet(frozenset({0, 1})))
    first = phase_one(inst, frozenset({0, 1}))
    assert first.toggles == frozenset()
    assert first.cost == 0


def test_phase_one_prefers_removal_on_ties():
    # Player 2 sees one investor (count 1 in [1, 1]): remove (0, 2) or add (1, 2), both cost 1
    inst = make_instance(3, [(0, 2)], [{0, 1, 2}, {0, 1, 2}, {1}], target=ExactSet(frozenset({0, 1})))
    first = phase_one(inst, frozenset({0, 1}))
    assert first.toggles == frozenset({(0, 2)})
    assert first.cost == 1


def test_phase_one_picks_cheaper_direction():
    inst = make_instance(
        3, [(0, 2)], [{0, 1, 2}, {0, 1, 2}, {1}], costs={(0, 2): 5}, target=ExactSet(frozenset({0, 1}))
    )
    first = phase_one(inst, frozenset({0, 1}))
    assert first.toggles == frozenset({(1, 2)})
    assert first.cost == 1


def test_phase_one_blocked_player():
    # Player 1 invests at every reachable count
    inst = make_instance(3, [], [{0}, {0, 1, 2}, {0, 1, 2}], target=ExactSet(frozenset({0})))
    assert phase_one(inst, frozenset({0})).blocked == 1
    outcome = solve_exact_set(inst)
    assert outcome.status == SolveStatus.STRUCTURALLY_INFEASIBLE
    assert "player 1" in outcome.reason


def test_exact_set_over_all_players_matches_solve_all(rng):
    for _ in range(30):
        inst = random_instance(rng, int(rng.integers(2, 6)))
        exact = inst.replace(target=ExactSet(frozenset(range(inst.n))))
        _assert_same_outcome(solve_all(inst), solve_exact_set(exact))


def test_edges_outside_the_target_set_change_nothing(rng):
    checked = 0
    while checked < 25:
        n = int(rng.integers(3, 6))
        members = random_members(rng, n)
        outside = sorted(set(range(n)) - members)
        if len(outside) < 2:
            continue
        inst = random_instance(rng, n, target=ExactSet(members))
        a, b = outside[0], outside[1]
        perturbed = inst.replace(graph=inst.graph.toggled((a, b)))
        _assert_same_outcome(solve_exact_set(inst), solve_exact_set(perturbed))
        checked += 1


# ──────────────────────── Agreement with the oracle ────────────────────────

@pytest.mark.parametrize("count", [40, pytest.param(200, marks=pytest.mark.slow)])
def test_solve_all_matches_oracle(rng, count):
    for _ in range(count):
        budget = Fraction(int(rng.integers(0, 4)))
        inst = random_instance(rng, int(rng.integers(3, 6)), budget=budget)
        polynomial, exhaustive = solve_all(inst), solve_oracle(inst, limit=5)
        _assert_same_outcome(polynomial, exhaustive)
        if polynomial.is_feasible:
            assert verify_solution(inst, polynomial.solution).ok
            assert verify_solution(inst, exhaustive.solution).ok


@pytest.mark.parametrize("count", [40, pytest.param(200, marks=pytest.mark.slow)])
def test_solve_exact_set_matches_oracle(rng, count):
    for _ in range(count):
        n = int(rng.integers(3, 6))
        budget = Fraction(int(rng.integers(0, 4)))
        inst = random_instance(rng, n, target=ExactSet(random_members(rng, n, proper=False)), budget=budget)
        polynomial, exhaustive = solve_exact_set(inst), solve_oracle(inst, limit=5)
        _assert_same_outcome(polynomial, exhaustive)
        if polynomial.is_feasible:
            assert verify_solution(inst, polynomial.solution).ok


def test_budget_monotonicity(rng):
    for _ in range(25):
        inst = random_instance(rng, int(rng.integers(2, 6)))
        outcome = solve_all(inst)
        if outcome.status != SolveStatus.FEASIBLE:
            continue
        cost = outcome.solution.modification_cost
        for budget in (cost, cost + 1, cost + Fraction(7, 2), INF):
            again = solve_all(inst.replace(budget=budget))
            assert again.is_feasible
            assert again.solution.modification_cost == cost
        if cost > 0:
            below = solve_all(inst.replace(budget=cost - Fraction(1, 2)))
            assert below.status == SolveStatus.INFEASIBLE_WITHIN_BUDGET
            assert below.min_cost == cost


# ──────────────────────── Oracle ────────────────────────

def test_oracle_best_shot_triangle_has_no_pair_of_investors():
    inst = make_instance(3, TRIANGLE_EDGES, [{0}] * 3, default_add=INF, default_remove=INF, target=AtLeast(2))
    outcome = solve_oracle(inst)
    assert outcome.status == SolveStatus.STRUCTURALLY_INFEASIBLE
    assert outcome.stats.oracle_expanded == 1


def test_oracle_empty_superset_is_equilibrium_existence():
    inst = make_instance(3, TRIANGLE_EDGES, [{0}] * 3, budget=0, target=SupersetOf(frozenset()))
    outcome = solve_oracle(inst)
    assert outcome.is_feasible
    assert outcome.solution.modification_cost == 0
    assert outcome.solution.investing.sorted_investing() == [0]


def test_oracle_limit():
    with pytest.raises(LimitExceededError):
        solve_oracle(make_instance(7, [], [{0}] * 7))


def _all_toggle_sets(inst):
    priced = [(pair, inst.pair_cost(*pair)) for pair in all_pairs(inst.n) if is_finite(inst.pair_cost(*pair))]
    every = []
    for size in range(len(priced) + 1):
        for chosen in combinations(priced, size):
            every.append((sum((c for _, c in chosen), Fraction(0)), tuple(p for p, _ in chosen)))
    return sorted(every)


def test_toggle_sets_come_in_cost_then_lexicographic_order():
    # Zero-cost and equal-cost pairs exercise the tie-break
    costs = {(0, 1): 0, (0, 2): 2, (1, 2): "1/2", (1, 3): INF, (2, 3): 0}
    inst = make_instance(4, [(0, 1), (2, 3)], costs=costs, default_add=2, default_remove=1)
    assert list(toggle_sets(inst)) == _all_toggle_sets(inst)


def test_toggle_sets_on_random_costs(rng):
    for _ in range(10):
        inst = random_instance(rng, int(rng.integers(2, 5)))
        assert list(toggle_sets(inst)) == _all_toggle_sets(inst)


def test_oracle_stops_at_the_first_edge_set():
    # The input graph already works; the 2^28 other edge sets are never generated
    inst = make_instance(8, [], [range(8)] * 8, budget=0)
    outcome = solve_oracle(inst, limit=8)
    assert outcome.is_feasible
    assert outcome.stats.oracle_expanded == 1
    assert outcome.solution.final_edges == frozenset()


# ──────────────────────── Dispatch ────────────────────────

@pytest.mark.parametrize(
    "degree_sets, target, expected",
    [
        ([{1, 2}, {1}, {0, 1}], AllInvest(), "gadget"),
        ([{1, 2}, {1}, {0, 1}], ExactSet(frozenset({0, 1})), "exact_set"),
        ([{0, 1}, {0}, {0}], SupersetOf(frozenset({0})), "oracle"),
        ([{1, 2}, {2}, {2}], SupersetOf(frozenset({0})), "oracle"),
        ([{1, 2}, {1}, {0, 1}], AtLeast(2), "oracle"),
        ([{0, 2}, {1}, {0}], AllInvest(), "oracle"),
        ([{0, 2}, {1}, {0}], ExactSet(frozenset({0})), "oracle"),
    ],
)
def test_route(degree_sets, target, expected):
    assert route(make_instance(3, [(0, 1)], degree_sets, target=target)) == expected


def test_route_explicit_solvers(rng):
    general = make_instance(3, [], [{0, 2}, {0}, {0}])
    with pytest.raises(SolverPreconditionError):
        route(general, "gadget")
    with pytest.raises(SolverPreconditionError):
        route(general, "greedy")
    with pytest.raises(ValueError):
        route(general, "simplex")
    assert route(general, "oracle") == "oracle"
    assert route(random_unit_instance(rng, 4, convex=True), "greedy") == "greedy_convex"


def test_solve_dispatches_and_records_path():
    assert solve(make_instance(2, [], [{1}, {1}])).stats.solver == "gadget"
    assert solve(_star()).stats.solver == "exact_set"
    hard = make_instance(3, TRIANGLE_EDGES, [{0}] * 3, target=AtLeast(1))
    outcome = solve(hard)
    assert outcome.stats.solver == "oracle"
    assert outcome.solution.investing.sorted_investing() == [0]


def test_solve_rejects_invalid_instances():
    with pytest.raises(InstanceError) as err:
        solve(make_instance(2, [], [{1}, set()]))
    assert err.value.diagnostics == ["infeasible: empty degree set (player 1)"]


def test_solve_paranoid(rng):
    for _ in range(10):
        inst = random_instance(rng, int(rng.integers(2, 6)))
        outcome = solve(inst, paranoid=True)
        if outcome.is_feasible:
            assert verify_solution(inst, outcome.solution).ok


def test_degree_set_members_above_range_are_clamped():
    inst = make_instance(2, [], [DegreeSet.interval(1, 6, 2).members] * 2, budget=1)
    outcome = solve(inst)
    assert outcome.is_feasible
    assert outcome.solution.added == frozenset({(0, 1)})
