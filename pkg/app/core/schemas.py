"""File models for the on-disk JSON formats (instances and solutions)."""
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

RationalText = Union[int, str]  # 3, "p/q", "p" or "inf"


class _FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class IntervalSpec(_FileModel):
    interval: tuple[int, int]


class UtilitySpec(_FileModel):
    values: list[RationalText]
    cost: RationalText


class CostSpec(_FileModel):
    default_add: RationalText = "1"
    default_remove: RationalText = "1"
    entries: list[tuple[int, int, RationalText]] = Field(default_factory=list)


class TargetSpec(_FileModel):
    kind: Literal["all", "exact", "superset", "atleast"]
    members: Optional[list[int]] = None
    r: Optional[int] = None


class InstanceFile(_FileModel):
    n: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)
    degree_sets: Optional[list[Union[list[int], IntervalSpec]]] = None
    utilities: Optional[list[UtilitySpec]] = None
    costs: CostSpec = Field(default_factory=CostSpec)
    budget: RationalText = "inf"
    target: TargetSpec = Field(default_factory=lambda: TargetSpec(kind="all"))
    metadata: dict[str, Any] = Field(default_factory=dict)


class SolutionFile(_FileModel):
    status: Literal["feasible", "infeasible_within_budget", "structurally_infeasible"]
    solver: str = ""
    cost: Optional[RationalText] = None
    min_cost: Optional[RationalText] = None
    reason: Optional[str] = None
    investing: Optional[list[int]] = None
    added: Optional[list[tuple[int, int]]] = None
    removed: Optional[list[tuple[int, int]]] = None
    final_edges: Optional[list[tuple[int, int]]] = None


class GraphFile(_FileModel):
    """Source graph H for the generate command."""

    n: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)
