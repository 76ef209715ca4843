from dataclasses import replace
from fractions import Fraction

import pytest

from app.core.models import (
    INF,
    AtLeast,
    DegreeSet,
    ExactSet,
    Shape,
    Solution,
    StrategyProfile,
    SupersetOf,
    UtilityTable,
)
from app.services.instances import greedy_applies, greedy_direction, validate, verify_solution
from tests.conftest import make_instance


def _two_nodes(**changes):
    return make_instance(2, degree_sets=[{1}, {1}], budget=1, **changes)


def _solution(inst, edges, investing=None):
    profile = StrategyProfile.everyone(inst.n) if investing is None else StrategyProfile.from_set(inst.n, investing)
    return Solution.from_edges(inst, edges, profile)


# ──────────────────────── validate ────────────────────────

def test_validate_well_formed():
    inst = make_instance(3, [(0, 1)], [{0, 1}, {1}, {0}], budget=2)
    report = validate(inst)
    assert report.ok
    assert report.warnings == []


def test_validate_flags_non_interval_for_polynomial_solver():
    inst = make_instance(3, [], [{0, 2}, {0}, {0}])
    assert validate(inst).ok
    report = validate(inst, solver="sigmoid")
    assert "non-interval degree set (player 0)" in report.errors


def test_validate_flags_empty_degree_set():
    inst = make_instance(3, [], [{0}, set(), {0}])
    report = validate(inst)
    assert not report.ok
    assert any(e.startswith("infeasible: empty degree set") for e in report.errors)


def test_validate_flags_set_emptied_by_clamping():
    inst = make_instance(3, [], [{0}, {5}, {0}])
    report = validate(inst)
    assert "infeasible: empty degree set after clamping (player 1)" in report.errors


def test_empty_set_outside_exact_target_is_only_a_warning():
    inst = make_instance(3, [], [{0}, set(), {0}], target=ExactSet(frozenset({0, 2})))
    report = validate(inst)
    assert report.ok
    assert any("never invests" in w for w in report.warnings)


def test_validate_rejects_polynomial_solver_for_hard_targets():
    inst = make_instance(3, [], [{0}, {0}, {0}], target=AtLeast(2))
    assert validate(inst).ok
    assert any("only the all / exact-set" in e for e in validate(inst, solver="gadget").errors)


@pytest.mark.parametrize(
    "target, fragment",
    [
        (SupersetOf(frozenset({4})), "unknown players [4]"),
        (AtLeast(5), "r=5 outside"),
    ],
)
def test_validate_target_range(target, fragment):
    inst = make_instance(3, [], [{0}, {0}, {0}], target=target)
    assert any(fragment in e for e in validate(inst).errors)


def test_validate_negative_budget():
    inst = make_instance(2, [], [{0}, {0}], budget=Fraction(-1))
    assert any("negative budget" in e for e in validate(inst).errors)


def test_validate_utilities_must_match_degree_sets():
    inst = make_instance(3, [], [{1}, {0}, {0}])
    tables = (UtilityTable.of([0, 2, 2, 2], 1),) * 3
    report = validate(replace(inst, utilities=tables))
    assert report.errors == ["utility table of player 0 disagrees with its degree set"]


# ──────────────────────── verify_solution ────────────────────────

def test_verify_accepts_added_edge():
    inst = _two_nodes()
    report = verify_solution(inst, _solution(inst, [(0, 1)]))
    assert report.ok
    assert report.recomputed_cost == 1


def test_verify_rejects_unmodified_graph():
    inst = _two_nodes()
    report = verify_solution(inst, _solution(inst, []))
    assert not report.ok
    assert "player 0 (investing): count 0 not in D_0" in report.failures
    assert "player 1 (investing): count 0 not in D_1" in report.failures


def test_verify_reports_cost_mismatch():
    inst = _two_nodes()
    sol = replace(_solution(inst, [(0, 1)]), modification_cost=Fraction(1, 2))
    report = verify_solution(inst, sol)
    assert report.failures == ["cost mismatch: recorded 1/2, recomputed 1"]


def test_verify_reports_over_budget():
    inst = _two_nodes(costs={(0, 1): 3})
    report = verify_solution(inst, _solution(inst, [(0, 1)]))
    assert report.failures == ["over budget: 3 > 1"]


def test_verify_reports_prohibited_modification():
    inst = _two_nodes(default_add=INF)
    report = verify_solution(inst, _solution(inst, [(0, 1)]))
    assert "prohibited modification (infinite cost)" in report.failures


def test_verify_checks_target_class():
    inst = make_instance(2, [], [{0}, {0}], budget=0, target=ExactSet(frozenset({0})))
    report = verify_solution(inst, _solution(inst, [], investing={0, 1}))
    assert report.failures == ["investing set [0, 1] not in target exact:0"]

    # With only player 0 investing, player 1 sits at count 0 in D = {0} and should invest
    report = verify_solution(inst, _solution(inst, [], investing={0}))
    assert report.failures == ["player 1 (non-investing): count 0 in D_1"]


def test_verify_checks_added_and_removed():
    inst = _two_nodes()
    sol = replace(_solution(inst, [(0, 1)]), added=frozenset())
    assert "added/removed do not match the final edge set" in verify_solution(inst, sol).failures


# ──────────────────────── fast-path applicability ────────────────────────

def test_greedy_direction_convex():
    inst = make_instance(
        3, [], [{1, 2}, {2}, {0, 1, 2}], target=ExactSet(frozenset({0, 1, 2})), default_remove=INF
    )
    assert greedy_direction(inst) == Shape.CONVEX


def test_greedy_direction_concave():
    inst = make_instance(
        3, [(0, 1), (1, 2)], [{0}, {0, 1}, {0}], target=ExactSet(frozenset({0, 1, 2})), default_add=INF
    )
    assert greedy_direction(inst) == Shape.CONCAVE
    assert not greedy_applies(inst, Shape.CONVEX)


def test_concave_path_applies_when_members_form_a_clique():
    # Full sets on a complete S read as both directions
    inst = make_instance(2, [(0, 1)], [{0, 1}, {0, 1}], target=ExactSet(frozenset({0, 1})), default_add=INF)
    assert greedy_direction(inst) == Shape.CONVEX
    assert greedy_applies(inst, Shape.CONCAVE)


def test_greedy_direction_needs_exact_target_and_unit_costs():
    assert greedy_direction(make_instance(2, [], [{1}, {1}])) is None
    inst = make_instance(2, [], [{1}, {1}], target=ExactSet(frozenset({0, 1})), default_add=2)
    assert greedy_direction(inst) is None


def test_greedy_shape_check_in_validate():
    inst = make_instance(3, [], [{1}, {1}, {1}], target=ExactSet(frozenset({0, 1, 2})))
    assert DegreeSet.of({1}, 3).shape == Shape.SIGMOID
    assert any(e.startswith("greedy solver needs") for e in validate(inst, solver="greedy").errors)
