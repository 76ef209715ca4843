from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import pytest

from app.core.errors import EmptyDegreeSetError, NonIntervalDegreeSetError
from app.core.models import INF, GadgetNode, NodeKind, all_pairs, is_finite
from app.services.gadget import (
    build_gadget,
    cost_scale,
    dump_gadget,
    extract_modification,
    matching_from_modification,
    player_gadget,
    verify_gadget,
)
from app.services.matching import is_perfect_matching, min_cost_perfect_matching
from app.services.sampling import random_instance
from tests.conftest import make_instance


def _two_nodes(**changes):
    return make_instance(2, degree_sets=[{1}, {1}], budget=1, **changes)


def _kinds(gg, kind):
    return [v for v, node in enumerate(gg.nodes) if node.kind == kind]


def _feasible_edge_sets(inst):
    """Every finite-cost edge set whose degrees fall inside the clamped degree sets."""
    pairs = list(all_pairs(inst.n))
    clamped = [d.clamped(inst.n) for d in inst.degree_sets]
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for b, p in enumerate(pairs) if (mask >> b) & 1)
        if not is_finite(inst.cost_of(edges)):
            continue
        degrees = [0] * inst.n
        for i, j in edges:
            degrees[i] += 1
            degrees[j] += 1
        if all(degrees[i] in clamped[i] for i in range(inst.n)):
            yield edges


def test_player_gadget_sizes():
    pg = player_gadget(degree=2, lower=4, upper=6, n=10)
    assert (pg.add_slots, pg.remove_slots) == (6, 2)
    assert pg.sigma == 6
    assert (pg.pad_plus, pg.pad_minus) == (2, 0)


def test_two_node_gadget():
    gg = build_gadget(_two_nodes())
    assert len(gg.nodes) == 4
    assert _kinds(gg, NodeKind.PARITY) == []
    assert len(_kinds(gg, NodeKind.EDGE_ADD)) == 2
    assert len(_kinds(gg, NodeKind.ADD_SLOT)) == 2
    assert gg.scale == 2
    # y pair at weight 0 plus one slot edge per endpoint at c/2 (scaled to 1)
    assert sorted(w for _, _, w in gg.edges) == [0, 1, 1]
    assert verify_gadget(gg) == []


def test_two_node_gadget_adds_the_edge():
    gg = build_gadget(_two_nodes())
    m = min_cost_perfect_matching(gg.as_weighted())
    mod = extract_modification(gg, m)
    assert mod.edges == frozenset({(0, 1)})
    assert mod.cost == 1


def test_already_satisfied_instance_costs_nothing():
    inst = make_instance(3, [(0, 1), (1, 2)], [{1}, {2}, {1}])
    gg = build_gadget(inst)
    m = min_cost_perfect_matching(gg.as_weighted())
    assert m.total_cost == 0
    assert extract_modification(gg, m).edges == inst.graph.edges


def test_identity_matching_extracts_the_input_graph():
    inst = make_instance(4, [(0, 1), (2, 3)], [{0, 1, 2}] * 4)
    gg = build_gadget(inst)
    m = matching_from_modification(gg, inst.graph.edges)
    assert all(pair in m.pairs for pair in gg.back_map)
    mod = extract_modification(gg, m)
    assert mod.edges == inst.graph.edges
    assert mod.cost == 0


def test_infinite_costs_get_no_slot_edges():
    gg = build_gadget(_two_nodes(default_add=INF))
    assert [w for _, _, w in gg.edges] == [0]
    assert min_cost_perfect_matching(gg.as_weighted()) is None


def test_degree_sets_are_clamped():
    inst = make_instance(2, [], [range(1, 8), range(1, 8)])
    gg = build_gadget(inst)
    assert [(pg.lower, pg.upper) for pg in gg.players] == [(1, 1), (1, 1)]
    assert len(gg.nodes) == 4


def test_build_rejects_bad_degree_sets():
    with pytest.raises(EmptyDegreeSetError) as err:
        build_gadget(make_instance(3, [], [{0}, {4}, {0}]))
    assert err.value.player == 1
    with pytest.raises(NonIntervalDegreeSetError) as err:
        build_gadget(make_instance(4, [], [{0}, {0}, {0, 2}, {0}]))
    assert err.value.player == 2


def test_cost_scale_uses_lcm_of_denominators():
    inst = make_instance(3, [(0, 1)], [{0, 1, 2}] * 3, costs={(0, 1): "1/2", (0, 2): "1/3", (1, 2): INF})
    assert cost_scale(inst) == 12
    gg = build_gadget(inst)
    assert sorted({w for _, _, w in gg.edges}) == [0, 2, 3]


def test_parity_node_completes_odd_counts():
    # A single add slot for player 0 leaves 7 nodes before the parity node
    inst = make_instance(3, [], [{1}, {0}, {0}])
    gg = build_gadget(inst)
    assert len(gg.nodes) == 8
    assert len(_kinds(gg, NodeKind.PARITY)) == 1
    assert verify_gadget(gg) == []
    # Player 0 cannot reach degree 1 without pushing someone else off 0
    assert min_cost_perfect_matching(gg.as_weighted()) is None


def test_pad_nodes_form_a_complete_graph():
    gg = build_gadget(make_instance(4, [(0, 1), (2, 3)], [{0, 1, 2}] * 4))
    pads = _kinds(gg, NodeKind.PAD_PLUS) + _kinds(gg, NodeKind.PAD_MINUS) + _kinds(gg, NodeKind.PARITY)
    assert len(pads) == 8
    present = {(min(u, v), max(u, v)) for u, v, _ in gg.edges}
    assert all(pair in present for pair in combinations(sorted(pads), 2))


def test_verify_gadget_catches_odd_node_count():
    gg = build_gadget(_two_nodes())
    broken = replace(gg, nodes=gg.nodes + (GadgetNode(NodeKind.PARITY),))
    assert any(v.startswith("parity:") for v in verify_gadget(broken))


def test_verify_gadget_catches_sigma_out_of_range():
    gg = build_gadget(make_instance(3, [(0, 1)], [{1, 2}, {1}, {0}]))
    pg = gg.players[0]
    mutated = replace(pg, lower=pg.sigma + 1, upper=max(pg.upper, pg.sigma + 1))
    broken = replace(gg, players=(mutated,) + gg.players[1:])
    assert any(v.startswith("sigma-range:") for v in verify_gadget(broken))


def test_dump_gadget_format():
    gg = build_gadget(_two_nodes())
    m = min_cost_perfect_matching(gg.as_weighted())
    lines = dump_gadget(gg, m).splitlines()
    assert lines[0] == "c gadget for 2 players, scale 2"
    assert lines[1] == "p edge 4 3"
    assert lines[2] == "c node 1 y+[0-1@0]"
    assert sum(line.startswith("e ") for line in lines) == 3
    assert sum(line.startswith("m ") for line in lines) == 2
    assert "c matching cost 2" in lines


@pytest.mark.parametrize("count", [40, pytest.param(200, marks=pytest.mark.slow)])
def test_gadget_invariants_on_random_instances(rng, count):
    for _ in range(count):
        inst = random_instance(rng, int(rng.integers(1, 7)))
        gg = build_gadget(inst)
        assert verify_gadget(gg) == []
        pair_count = inst.n * (inst.n - 1) // 2
        bound = 2 * pair_count + sum(
            pg.add_slots + pg.remove_slots + pg.pad_plus + pg.pad_minus for pg in gg.players
        ) + 1
        assert len(gg.nodes) <= bound

        m = min_cost_perfect_matching(gg.as_weighted())
        if m is None:
            continue
        mod = extract_modification(gg, m)
        assert Fraction(m.total_cost, gg.scale) == inst.cost_of(mod.edges) == mod.cost
        degrees = [0] * inst.n
        for i, j in mod.edges:
            degrees[i] += 1
            degrees[j] += 1
        assert all(degrees[i] in inst.degree_sets[i] for i in range(inst.n))


def test_forward_matching_round_trips_every_feasible_modification(rng):
    for _ in range(25):
        inst = random_instance(rng, int(rng.integers(2, 5)))
        gg = build_gadget(inst)
        weighted = gg.as_weighted()
        for edges in _feasible_edge_sets(inst):
            m = matching_from_modification(gg, edges)
            assert is_perfect_matching(weighted, m.pairs)
            mod = extract_modification(gg, m)
            assert mod.edges == edges
            assert mod.cost == inst.cost_of(edges)


def test_forward_matching_rejects_degree_violations():
    gg = build_gadget(_two_nodes())
    with pytest.raises(ValueError):
        matching_from_modification(gg, [])
