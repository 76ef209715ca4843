import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Union

INF = math.inf

Cost = Union[Fraction, float]  # float only ever holds INF
Pair = tuple[int, int]


def is_finite(value: Cost) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def to_cost(value) -> Cost:
    """Coerce ints, Fractions, "p/q" strings and "inf" into the extended-rational cost type."""
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        raise ValueError(f"float costs are not exact: {value!r}")
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    result = Fraction(value)
    if result < 0:
        raise ValueError(f"negative cost: {value!r}")
    return result


def norm_pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError(f"loop pair ({i}, {i})")
    return (i, j) if i < j else (j, i)


def all_pairs(n: int) -> Iterator[Pair]:
    return combinations(range(n), 2)


# ──────────────────────── Game ────────────────────────

@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Pair] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"negative player count {self.n}")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) is not a normalized pair over {self.n} players")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        return cls(n, frozenset(norm_pair(i, j) for i, j in edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neigh: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            neigh[i].add(j)
            neigh[j].add(i)
        return tuple(frozenset(s) for s in neigh)

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def has_edge(self, i: int, j: int) -> bool:
        return norm_pair(i, j) in self.edges

    def toggled(self, pair: Pair) -> "Graph":
        return Graph(self.n, self.edges ^ {norm_pair(*pair)})

    def induced(self, nodes: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph on `nodes`, relabelled 0..k-1 in ascending order; also returns the new->old map."""
        order = tuple(sorted(set(nodes)))
        index = {v: k for k, v in enumerate(order)}
        edges = frozenset(
            (index[i], index[j]) for i, j in self.edges if i in index and j in index
        )
        return Graph(len(order), edges), order

    def sorted_edges(self) -> list[Pair]:
        return sorted(self.edges)


class Shape(str, Enum):
    GENERAL = "general"
    CONCAVE = "concave"  # downward-closed interval
    CONVEX = "convex"  # upward-closed interval
    SIGMOID = "sigmoid"  # any interval


@dataclass(frozen=True)
class DegreeSet:
    """Investing-neighbour counts for which investing is a best response.

    `n` is the player count of the enclosing game. Members above n-1 are tolerated
    (some reductions emit literal bounds past the instance size) and dropped by
    `clamped()`.
    """

    members: frozenset[int]
    n: int

    def __post_init__(self):
        if any(z < 0 for z in self.members):
            raise ValueError(f"negative degree in {sorted(self.members)}")

    @classmethod
    def of(cls, members: Iterable[int], n: int) -> "DegreeSet":
        return cls(frozenset(members), n)

    @classmethod
    def interval(cls, lower: int, upper: int, n: int) -> "DegreeSet":
        return cls(frozenset(range(lower, upper + 1)), n)

    def __contains__(self, count: int) -> bool:
        return count in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def lower(self) -> Optional[int]:
        return min(self.members) if self.members else None

    @property
    def upper(self) -> Optional[int]:
        return max(self.members) if self.members else None

    @property
    def is_interval(self) -> bool:
        if not self.members:
            return True
        return self.upper - self.lower + 1 == len(self.members)

    @property
    def shape(self) -> Shape:
        if not self.is_interval:
            return Shape.GENERAL
        if not self.members or self.lower == 0:
            return Shape.CONCAVE
        if self.upper >= self.n - 1:
            return Shape.CONVEX
        return Shape.SIGMOID

    @property
    def in_range(self) -> bool:
        return all(z < self.n for z in self.members)

    def clamped(self, n: Optional[int] = None) -> "DegreeSet":
        size = self.n if n is None else n
        return DegreeSet(frozenset(z for z in self.members if z < size), size)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class UtilityTable:
    """g(0..n) for an n-player game plus the investment cost c."""

    values: tuple[Fraction, ...]
    invest_cost: Fraction

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("a utility table needs at least g(0) and g(1)")
        if not all(is_finite(v) for v in (*self.values, self.invest_cost)):
            raise ValueError("utility values and cost must be finite")
        if self.invest_cost < 0:
            raise ValueError(f"negative investment cost {self.invest_cost}")
        if self.values[0] < 0:
            raise ValueError("utility values must be nonnegative")
        for z in range(len(self.values) - 1):
            if self.values[z + 1] < self.values[z]:
                raise ValueError(f"utility table decreases at z={z}")

    @classmethod
    def of(cls, values: Iterable, invest_cost) -> "UtilityTable":
        return cls(tuple(Fraction(v) for v in values), Fraction(invest_cost))

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def gain(self, z: int) -> Fraction:
        return self.values[z + 1] - self.values[z]


@dataclass(frozen=True)
class StrategyProfile:
    invest: tuple[bool, ...]

    @classmethod
    def from_set(cls, n: int, investing: Iterable[int]) -> "StrategyProfile":
        chosen = set(investing)
        return cls(tuple(i in chosen for i in range(n)))

    @classmethod
    def everyone(cls, n: int) -> "StrategyProfile":
        return cls((True,) * n)

    @property
    def n(self) -> int:
        return len(self.invest)

    @cached_property
    def investing(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.invest) if x)

    def sorted_investing(self) -> list[int]:
        return sorted(self.investing)


# ──────────────────────── Target classes ────────────────────────

@dataclass(frozen=True)
class AllInvest:
    kind = "all"

    def contains(self, investing: frozenset[int], n: int) -> bool:
        return len(investing) == n

    def describe(self) -> str:
        return "all"


@dataclass(frozen=True)
class ExactSet:
    members: frozenset[int]
    kind = "exact"

    def contains(self, investing: frozenset[int], n: int) -> bool:
        return investing == self.members

    def describe(self) -> str:
        return f"exact:{','.join(map(str, sorted(self.members)))}"


@dataclass(frozen=True)
class SupersetOf:
    members: frozenset[int]
    kind = "superset"

    def contains(self, investing: frozenset[int], n: int) -> bool:
        return self.members <= investing

    def describe(self) -> str:
        return f"superset:{','.join(map(str, sorted(self.members)))}"


@dataclass(frozen=True)
class AtLeast:
    r: int
    kind = "atleast"

    def contains(self, investing: frozenset[int], n: int) -> bool:
        return len(investing) >= self.r

    def describe(self) -> str:
        return f"atleast:{self.r}"


TargetClass = Union[AllInvest, ExactSet, SupersetOf, AtLeast]


def parse_target(text: str) -> TargetClass:
    """`all`, `exact:0,2`, `superset:1`, `atleast:2`: the CLI spelling of a target class."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind == "all":
        return AllInvest()
    if kind == "atleast":
        return AtLeast(int(arg))
    members = frozenset(int(v) for v in arg.split(",") if v.strip())
    if kind == "exact":
        return ExactSet(members)
    if kind == "superset":
        return SupersetOf(members)
    raise ValueError(f"unknown target class {text!r}")


# ──────────────────────── Design instances ────────────────────────

@dataclass(frozen=True)
class CostMatrix:
    """Symmetric pair costs: removal cost for pairs in E', addition cost otherwise.

    Pairs without an explicit entry fall back to `default_add` / `default_remove`.
    """

    n: int
    overrides: Mapping[Pair, Cost] = field(default_factory=dict)
    default_add: Cost = Fraction(1)
    default_remove: Cost = Fraction(1)

    def __post_init__(self):
        for (i, j), value in self.overrides.items():
            if not (0 <= i < j < self.n):
                raise ValueError(f"cost entry ({i}, {j}) is not a normalized pair over {self.n} players")
            if is_finite(value) and value < 0:
                raise ValueError(f"negative cost for ({i}, {j})")

    @classmethod
    def build(
        cls,
        n: int,
        entries: Optional[Mapping[tuple[int, int], object]] = None,
        default_add=1,
        default_remove=1,
    ) -> "CostMatrix":
        overrides = {norm_pair(i, j): to_cost(v) for (i, j), v in (entries or {}).items()}
        return cls(n, overrides, to_cost(default_add), to_cost(default_remove))

    def get(self, i: int, j: int, present: bool) -> Cost:
        pair = norm_pair(i, j)
        if pair in self.overrides:
            return self.overrides[pair]
        return self.default_remove if present else self.default_add


@dataclass(frozen=True)
class DesignInstance:
    graph: Graph  # G'
    degree_sets: tuple[DegreeSet, ...]
    costs: CostMatrix
    budget: Cost
    target: TargetClass
    utilities: Optional[tuple[UtilityTable, ...]] = None
    metadata: Mapping[str, object] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def pair_cost(self, i: int, j: int) -> Cost:
        return self.costs.get(i, j, self.graph.has_edge(i, j))

    def cost_of(self, edges: frozenset[Pair]) -> Cost:
        total: Cost = Fraction(0)
        for pair in edges ^ self.graph.edges:
            total = total + self.pair_cost(*pair)
        return total

    @property
    def has_interval_sets(self) -> bool:
        return all(d.clamped(self.n).is_interval for d in self.degree_sets)

    def replace(self, **changes) -> "DesignInstance":
        return replace(self, **changes)


@dataclass(frozen=True)
class Solution:
    final_edges: frozenset[Pair]
    investing: StrategyProfile
    modification_cost: Fraction
    added: frozenset[Pair]
    removed: frozenset[Pair]

    @classmethod
    def from_edges(
        cls, inst: DesignInstance, final_edges: Iterable[Pair], investing: StrategyProfile
    ) -> "Solution":
        edges = frozenset(norm_pair(i, j) for i, j in final_edges)
        added = edges - inst.graph.edges
        removed = inst.graph.edges - edges
        return cls(edges, investing, inst.cost_of(edges), added, removed)


# ──────────────────────── Matching ────────────────────────

@dataclass(frozen=True)
class WeightedGraph:
    node_count: int
    weighted_edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen: set[Pair] = set()
        for u, v, w in self.weighted_edges:
            if u == v:
                raise ValueError(f"loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) outside {self.node_count} nodes")
            if w < 0 or int(w) != w:
                raise ValueError(f"edge ({u}, {v}) weight {w} is not a nonnegative integer")
            pair = norm_pair(u, v)
            if pair in seen:
                raise ValueError(f"parallel edge {pair}")
            seen.add(pair)

    @cached_property
    def weight(self) -> dict[Pair, int]:
        return {norm_pair(u, v): int(w) for u, v, w in self.weighted_edges}


@dataclass(frozen=True)
class PerfectMatching:
    pairs: frozenset[Pair]
    total_cost: int

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)


# ──────────────────────── Gadget ────────────────────────

class NodeKind(str, Enum):
    EDGE_KEEP = "y-"  # y⁻ node of an existing edge
    EDGE_ADD = "y+"  # y⁺ node of an absent pair
    ADD_SLOT = "x+"
    REMOVE_SLOT = "x-"
    PAD_PLUS = "z+"
    PAD_MINUS = "z-"
    PARITY = "zhat"


@dataclass(frozen=True)
class GadgetNode:
    kind: NodeKind
    player: int = -1  # owning player; -1 for the parity node
    index: int = 0  # slot index inside X/Z sets
    pair: Optional[Pair] = None  # input pair for y nodes

    def tag(self) -> str:
        if self.kind == NodeKind.PARITY:
            return "zhat"
        if self.pair is not None:
            return f"{self.kind.value}[{self.pair[0]}-{self.pair[1]}@{self.player}]"
        return f"{self.kind.value}[{self.player}.{self.index}]"


@dataclass(frozen=True)
class PlayerGadget:
    degree: int  # deg in G'
    lower: int
    upper: int
    add_slots: int  # |X+|
    remove_slots: int  # |X-|
    pad_plus: int  # |Z+|
    pad_minus: int  # |Z-|

    @property
    def sigma(self) -> int:
        return self.degree + self.add_slots - self.remove_slots


@dataclass(frozen=True)
class GadgetGraph:
    n: int
    nodes: tuple[GadgetNode, ...]
    edges: tuple[tuple[int, int, int], ...]
    back_map: Mapping[Pair, Pair]  # (y node, y node) -> input vertex pair
    scale: int
    players: tuple[PlayerGadget, ...]
    present: frozenset[Pair]  # E'

    def as_weighted(self) -> WeightedGraph:
        return WeightedGraph(len(self.nodes), self.edges)


# ──────────────────────── Solver outcomes ────────────────────────

class SolveStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE_WITHIN_BUDGET = "infeasible_within_budget"
    STRUCTURALLY_INFEASIBLE = "structurally_infeasible"


@dataclass
class SolveStats:
    solver: str = ""  # gadget | exact_set | greedy_convex | greedy_concave | oracle
    gadget_nodes: int = 0
    gadget_edges: int = 0
    matching_seconds: float = 0.0
    oracle_expanded: int = 0
    phase1_cost: Optional[Fraction] = None


@dataclass
class SolveOutcome:
    status: SolveStatus
    solution: Optional[Solution] = None
    min_cost: Optional[Fraction] = None
    reason: Optional[str] = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def is_feasible(self) -> bool:
        return self.status == SolveStatus.FEASIBLE


# ──────────────────────── Reductions ────────────────────────

class SourceKind(str, Enum):
    INDEPENDENT_SET = "is"
    CLIQUE = "clique"
    VERTEX_COVER = "vc"


@dataclass(frozen=True)
class SourceInstance:
    kind: SourceKind
    graph: Graph  # H
    k: int

    def __post_init__(self):
        if not (0 <= self.k <= self.graph.n):
            raise ValueError(f"k={self.k} outside [0, {self.graph.n}]")
