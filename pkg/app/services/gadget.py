"""Generalized Tutte construction: degree-interval editing as minimum-cost perfect matching.

For every pair of players the gadget holds two y nodes joined by an edge; matching
them to each other keeps the pair as it is in G', matching both to slot nodes
toggles it. Per player i, X+ / X- slots count additions / removals, and the
padding sets Z+ / Z- absorb unused slots so the resulting degree can land
anywhere in [L_i, R_i].
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from app.core.errors import EmptyDegreeSetError, NonIntervalDegreeSetError
from app.core.models import (
    DesignInstance,
    GadgetGraph,
    GadgetNode,
    NodeKind,
    Pair,
    PerfectMatching,
    PlayerGadget,
    all_pairs,
    is_finite,
    norm_pair,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Modification:
    edges: frozenset[Pair]  # final edge set E
    cost: Fraction


# ──────────────────────── Construction ────────────────────────

def player_gadget(degree: int, lower: int, upper: int, n: int) -> PlayerGadget:
    add_slots = min(upper, n - degree - 1)
    remove_slots = min(n - lower - 1, degree)
    sigma = degree + add_slots - remove_slots
    return PlayerGadget(
        degree=degree,
        lower=lower,
        upper=upper,
        add_slots=add_slots,
        remove_slots=remove_slots,
        pad_plus=sigma - lower,
        pad_minus=upper - sigma,
    )


def cost_scale(inst: DesignInstance) -> int:
    """2 * lcm of the denominators of every finite pair cost."""
    denominators = [
        Fraction(c).denominator
        for c in (inst.pair_cost(i, j) for i, j in all_pairs(inst.n))
        if is_finite(c)
    ]
    return 2 * math.lcm(1, *denominators)


class _Builder:
    def __init__(self):
        self.nodes: list[GadgetNode] = []
        self.edges: list[tuple[int, int, int]] = []

    def add_node(self, node: GadgetNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def add_nodes(self, kind: NodeKind, player: int, count: int) -> list[int]:
        return [self.add_node(GadgetNode(kind, player, s)) for s in range(count)]

    def connect(self, u: int, v: int, weight: int = 0) -> None:
        self.edges.append((u, v, weight))

    def connect_all(self, left: Iterable[int], right: Iterable[int], weight: int = 0) -> None:
        right = list(right)
        for u in left:
            for v in right:
                self.connect(u, v, weight)


def build_gadget(inst: DesignInstance) -> GadgetGraph:
    """Build H for the all-invest target. Degree sets are clamped to [0, n-1] first."""
    n = inst.n
    graph = inst.graph

    players: list[PlayerGadget] = []
    for i in range(n):
        d = inst.degree_sets[i].clamped(n)
        if not d.members:
            raise EmptyDegreeSetError(i)
        if not d.is_interval:
            raise NonIntervalDegreeSetError(i)
        players.append(player_gadget(graph.degree(i), d.lower, d.upper, n))

    scale = cost_scale(inst)
    half = scale // 2
    builder = _Builder()

    # y nodes, by sorted pair
    y_nodes: dict[Pair, tuple[int, int]] = {}
    back_map: dict[Pair, Pair] = {}
    for i, j in all_pairs(n):
        kind = NodeKind.EDGE_KEEP if graph.has_edge(i, j) else NodeKind.EDGE_ADD
        yi = builder.add_node(GadgetNode(kind, i, 0, (i, j)))
        yj = builder.add_node(GadgetNode(kind, j, 0, (i, j)))
        builder.connect(yi, yj)
        y_nodes[(i, j)] = (yi, yj)
        back_map[(yi, yj)] = (i, j)

    add_slots: list[list[int]] = []
    remove_slots: list[list[int]] = []
    pads: list[int] = []
    for i, pg in enumerate(players):
        x_plus = builder.add_nodes(NodeKind.ADD_SLOT, i, pg.add_slots)
        x_minus = builder.add_nodes(NodeKind.REMOVE_SLOT, i, pg.remove_slots)
        z_plus = builder.add_nodes(NodeKind.PAD_PLUS, i, pg.pad_plus)
        z_minus = builder.add_nodes(NodeKind.PAD_MINUS, i, pg.pad_minus)
        builder.connect_all(x_minus, x_plus)
        builder.connect_all(z_plus, x_plus)
        builder.connect_all(z_minus, x_minus)
        add_slots.append(x_plus)
        remove_slots.append(x_minus)
        pads.extend(z_plus)
        pads.extend(z_minus)

    if len(builder.nodes) % 2:
        pads.append(builder.add_node(GadgetNode(NodeKind.PARITY)))
    for a in range(len(pads)):
        for b in range(a + 1, len(pads)):
            builder.connect(pads[a], pads[b])

    # Slot edges carry c_e / 2 each (scaled); infinite costs get no slot edges at all
    for (i, j), (yi, yj) in y_nodes.items():
        cost = inst.pair_cost(i, j)
        if not is_finite(cost):
            continue
        weight = int(Fraction(cost) * half)
        slots = remove_slots if graph.has_edge(i, j) else add_slots
        builder.connect_all(slots[i], [yi], weight)
        builder.connect_all(slots[j], [yj], weight)

    gadget = GadgetGraph(
        n=n,
        nodes=tuple(builder.nodes),
        edges=tuple(builder.edges),
        back_map=back_map,
        scale=scale,
        players=tuple(players),
        present=graph.edges,
    )
    logger.info(f"Gadget for {n} players: {len(gadget.nodes)} nodes, {len(gadget.edges)} edges, scale {scale}")
    return gadget


# ──────────────────────── Matching <-> modification ────────────────────────

def extract_modification(gg: GadgetGraph, m: PerfectMatching) -> Modification:
    toggled = {
        pair for (yi, yj), pair in gg.back_map.items() if norm_pair(yi, yj) not in m.pairs
    }
    edges = frozenset(gg.present ^ toggled)
    return Modification(edges=edges, cost=Fraction(m.total_cost, gg.scale))


def _y_index(gg: GadgetGraph) -> dict[tuple[Pair, int], int]:
    index: dict[tuple[Pair, int], int] = {}
    for (yi, yj), pair in gg.back_map.items():
        index[(pair, pair[0])] = yi
        index[(pair, pair[1])] = yj
    return index


def _nodes_by_kind(gg: GadgetGraph) -> dict[tuple[NodeKind, int], list[int]]:
    groups: dict[tuple[NodeKind, int], list[int]] = {}
    for v, node in enumerate(gg.nodes):
        groups.setdefault((node.kind, node.player), []).append(v)
    return groups


def matching_from_modification(gg: GadgetGraph, final_edges: Iterable[Pair]) -> PerfectMatching:
    """The perfect matching that encodes a degree-feasible edge set E (added/removed pairs in sorted order)."""
    edges = frozenset(norm_pair(i, j) for i, j in final_edges)
    toggled = sorted(edges ^ gg.present)
    toggled_set = set(toggled)
    weight = gg.as_weighted().weight
    y_index = _y_index(gg)
    groups = _nodes_by_kind(gg)

    pairs: list[Pair] = []
    for (yi, yj), pair in gg.back_map.items():
        if pair not in toggled_set:
            pairs.append(norm_pair(yi, yj))

    pads: list[int] = []
    for i, pg in enumerate(gg.players):
        x_plus = groups.get((NodeKind.ADD_SLOT, i), [])
        x_minus = groups.get((NodeKind.REMOVE_SLOT, i), [])
        added = [p for p in toggled if i in p and p not in gg.present]
        removed = [p for p in toggled if i in p and p in gg.present]
        if len(added) > len(x_plus) or len(removed) > len(x_minus):
            raise ValueError(f"player {i}: modification exceeds the slot capacity of the gadget")
        for slot, pair in zip(x_plus, added):
            pairs.append(norm_pair(slot, y_index[(pair, i)]))
        for slot, pair in zip(x_minus, removed):
            pairs.append(norm_pair(slot, y_index[(pair, i)]))

        free_plus = x_plus[len(added):]
        free_minus = x_minus[len(removed):]
        common = min(len(free_plus), len(free_minus))
        for a, b in zip(free_plus[:common], free_minus[:common]):
            pairs.append(norm_pair(a, b))
        free_plus, free_minus = free_plus[common:], free_minus[common:]

        z_plus = groups.get((NodeKind.PAD_PLUS, i), [])
        z_minus = groups.get((NodeKind.PAD_MINUS, i), [])
        if len(free_plus) > len(z_plus) or len(free_minus) > len(z_minus):
            raise ValueError(f"player {i}: resulting degree falls outside [{pg.lower}, {pg.upper}]")
        for a, b in zip(free_plus, z_plus):
            pairs.append(norm_pair(a, b))
        for a, b in zip(free_minus, z_minus):
            pairs.append(norm_pair(a, b))
        pads.extend(z_plus[len(free_plus):])
        pads.extend(z_minus[len(free_minus):])

    pads.extend(groups.get((NodeKind.PARITY, -1), []))
    for a, b in zip(pads[::2], pads[1::2]):
        pairs.append(norm_pair(a, b))

    missing = [p for p in pairs if p not in weight]
    if missing:
        raise ValueError(f"modification uses prohibited pairs (no gadget edge for {missing[0]})")
    return PerfectMatching(frozenset(pairs), sum(weight[p] for p in pairs))


# ──────────────────────── Checks / debug output ────────────────────────

def verify_gadget(gg: GadgetGraph) -> list[str]:
    """Structural invariants of H; returns violations as 'tag: detail' strings."""
    violations: list[str] = []
    n = gg.n
    groups = _nodes_by_kind(gg)

    if len(gg.nodes) % 2:
        violations.append(f"parity: {len(gg.nodes)} nodes")

    degrees = [0] * n
    for i, j in gg.present:
        degrees[i] += 1
        degrees[j] += 1

    for i, pg in enumerate(gg.players):
        expected = player_gadget(degrees[i], pg.lower, pg.upper, n)
        if pg.degree != degrees[i]:
            violations.append(f"degree: player {i} records {pg.degree}, G' has {degrees[i]}")
        if not pg.lower <= pg.sigma <= pg.upper:
            violations.append(f"sigma-range: player {i} sigma {pg.sigma} outside [{pg.lower}, {pg.upper}]")
        for tag, kind, recorded, wanted in (
            ("x-plus-size", NodeKind.ADD_SLOT, pg.add_slots, expected.add_slots),
            ("x-minus-size", NodeKind.REMOVE_SLOT, pg.remove_slots, expected.remove_slots),
            ("z-plus-size", NodeKind.PAD_PLUS, pg.pad_plus, expected.pad_plus),
            ("z-minus-size", NodeKind.PAD_MINUS, pg.pad_minus, expected.pad_minus),
        ):
            actual = len(groups.get((kind, i), []))
            if recorded != wanted or actual != wanted:
                violations.append(f"{tag}: player {i} has {actual} nodes (recorded {recorded}), expected {wanted}")

    pair_count = n * (n - 1) // 2
    if len(gg.back_map) != pair_count:
        violations.append(f"y-pairs: {len(gg.back_map)} y pairs for {pair_count} player pairs")

    slot_kinds = {NodeKind.ADD_SLOT: NodeKind.EDGE_ADD, NodeKind.REMOVE_SLOT: NodeKind.EDGE_KEEP}
    for u, v, w in gg.edges:
        a, b = gg.nodes[u], gg.nodes[v]
        if w and not any(
            slot_kinds.get(x.kind) == y.kind and x.player == y.player for x, y in ((a, b), (b, a))
        ):
            violations.append(f"edge-cost: nonzero weight {w} on {a.tag()}-{b.tag()}")

    bound = 2 * pair_count + sum(
        pg.add_slots + pg.remove_slots + pg.pad_plus + pg.pad_minus for pg in gg.players
    ) + 1
    if len(gg.nodes) > bound:
        violations.append(f"node-count: {len(gg.nodes)} exceeds {bound}")
    return violations


def dump_gadget(gg: GadgetGraph, matching: Optional[PerfectMatching] = None) -> str:
    """DIMACS-like edge list: tagged nodes, weighted edges, and optionally the matched pairs."""
    lines = [
        f"c gadget for {gg.n} players, scale {gg.scale}",
        f"p edge {len(gg.nodes)} {len(gg.edges)}",
    ]
    lines.extend(f"c node {v + 1} {node.tag()}" for v, node in enumerate(gg.nodes))
    lines.extend(f"e {u + 1} {v + 1} {w}" for u, v, w in gg.edges)
    if matching is not None:
        lines.append(f"c matching cost {matching.total_cost}")
        lines.extend(f"m {u + 1} {v + 1}" for u, v in matching.sorted_pairs())
    return "\n".join(lines) + "\n"
