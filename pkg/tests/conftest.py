from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from app.core.models import INF, AllInvest, CostMatrix, DegreeSet, DesignInstance, Graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TRIANGLE_EDGES = [(0, 1), (0, 2), (1, 2)]


def make_instance(
    n: int,
    edges=(),
    degree_sets=None,
    costs=None,
    default_add=1,
    default_remove=1,
    budget=INF,
    target=None,
) -> DesignInstance:
    """Instance from plain lists: degree_sets is one iterable of members per player."""
    sets = degree_sets if degree_sets is not None else [range(n)] * n
    return DesignInstance(
        graph=Graph.from_edges(n, edges),
        degree_sets=tuple(DegreeSet.of(d, n) for d in sets),
        costs=CostMatrix.build(n, costs, default_add, default_remove),
        budget=budget if budget == INF else Fraction(budget),
        target=AllInvest() if target is None else target,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
