import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from app.config import settings
from app.core.errors import LimitExceededError
from app.core.models import DegreeSet, Graph, Shape, StrategyProfile, UtilityTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsneReport:
    ok: bool
    counts: tuple[int, ...]
    violations: tuple[int, ...] = field(default_factory=tuple)  # players not best-responding


# ──────────────────────── Utilities ────────────────────────

def neighbor_investors(g: Graph, x: StrategyProfile, i: int) -> int:
    if not 0 <= i < g.n:
        raise IndexError(f"player {i} out of range for {g.n} players")
    if x.n != g.n:
        raise ValueError(f"profile has {x.n} entries, graph has {g.n} players")
    return sum(1 for j in g.neighbors(i) if x.invest[j])


def utility(u: UtilityTable, x_i: bool, count: int) -> Fraction:
    """g(x_i + count) - c * x_i."""
    return u.values[int(x_i) + count] - (u.invest_cost if x_i else 0)


def best_response(u: UtilityTable, count: int) -> bool:
    # Ties go to investing
    return utility(u, True, count) >= utility(u, False, count)


def derive_degree_set(u: UtilityTable) -> DegreeSet:
    members = frozenset(z for z in range(u.n) if u.gain(z) >= u.invest_cost)
    return DegreeSet(members, u.n)


def realize_degree_set(d: DegreeSet, n: Optional[int] = None) -> UtilityTable:
    """Slope-2 table with cost 1: g rises by 2 exactly on the members of `d`."""
    size = d.n if n is None else n
    if size < 1:
        raise ValueError("a game needs at least one player")
    out_of_range = [z for z in d.members if z >= size]
    if out_of_range:
        raise ValueError(f"degree set members {sorted(out_of_range)} outside 0..{size - 1}")
    values = [Fraction(0)]
    for z in range(size):
        values.append(values[-1] + (2 if z in d else 0))
    return UtilityTable(tuple(values), Fraction(1))


def degree_sets_from_utilities(tables: Sequence[UtilityTable]) -> tuple[DegreeSet, ...]:
    return tuple(derive_degree_set(u) for u in tables)


def threshold(d: DegreeSet, shape: Optional[Shape] = None) -> int:
    """L for upward-closed sets, R for downward-closed ones.

    The full set {0..n-1} is both; pass `shape` to say which reading is wanted.
    """
    if not d.members:
        raise ValueError("empty degree set has no threshold")
    if shape is None:
        shape = d.shape
    elif shape == Shape.CONVEX and d.upper < d.n - 1 or shape == Shape.CONCAVE and d.lower != 0:
        raise ValueError(f"degree set {d.sorted_members()} is not {shape.value}")
    if shape == Shape.CONVEX:
        return d.lower
    if shape == Shape.CONCAVE:
        return d.upper
    raise ValueError(f"threshold is only defined for convex/concave sets, got {shape.value}")


# ──────────────────────── Equilibria ────────────────────────

def is_best_response(d: DegreeSet, x_i: bool, count: int) -> bool:
    return (count in d) == bool(x_i)


def is_psne(g: Graph, degsets: Sequence[DegreeSet], x: StrategyProfile) -> PsneReport:
    if len(degsets) != g.n or x.n != g.n:
        raise ValueError(f"size mismatch: graph {g.n}, degree sets {len(degsets)}, profile {x.n}")
    counts = tuple(neighbor_investors(g, x, i) for i in range(g.n))
    violations = tuple(
        i for i in range(g.n) if not is_best_response(degsets[i], x.invest[i], counts[i])
    )
    return PsneReport(ok=not violations, counts=counts, violations=violations)


def _adjacency_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for i, j in g.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def enumerate_psne(
    g: Graph, degsets: Sequence[DegreeSet], limit: Optional[int] = None
) -> list[StrategyProfile]:
    """Every pure equilibrium, ordered lexicographically by the sorted investing set."""
    cap = settings.psne_limit if limit is None else limit
    if g.n > cap:
        raise LimitExceededError("PSNE enumeration", g.n, cap)
    if len(degsets) != g.n:
        raise ValueError(f"{len(degsets)} degree sets for {g.n} players")

    masks = _adjacency_masks(g)
    members = [d.members for d in degsets]
    found: list[tuple[int, ...]] = []
    for profile in range(1 << g.n):
        for i in range(g.n):
            count = (masks[i] & profile).bit_count()
            if ((profile >> i) & 1) != (count in members[i]):
                break
        else:
            found.append(tuple(i for i in range(g.n) if (profile >> i) & 1))

    found.sort()
    logger.debug(f"Enumerated {len(found)} PSNE over {1 << g.n} profiles")
    return [StrategyProfile.from_set(g.n, investing) for investing in found]
