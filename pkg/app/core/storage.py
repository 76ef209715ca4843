import json
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from app.core.errors import InstanceParseError
from app.core.models import (
    AllInvest,
    AtLeast,
    CostMatrix,
    DegreeSet,
    DesignInstance,
    ExactSet,
    Graph,
    SolveOutcome,
    SolveStats,
    SolveStatus,
    Solution,
    StrategyProfile,
    SupersetOf,
    TargetClass,
    UtilityTable,
    is_finite,
    norm_pair,
    to_cost,
)
from app.core.schemas import InstanceFile, SolutionFile, TargetSpec
from app.services.game import derive_degree_set

logger = logging.getLogger(__name__)


def format_rational(value) -> str:
    return str(Fraction(value)) if is_finite(value) else "inf"


def _parse_rational(text: str, location: str):
    try:
        return to_cost(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceParseError(f"bad rational {text!r} ({e})", location) from e


def _parse_finite(text: str, location: str) -> Fraction:
    value = _parse_rational(text, location)
    if not is_finite(value):
        raise InstanceParseError(f"must be finite, got {text!r}", location)
    return value


def _validation_location(error: ValidationError) -> tuple[str, str]:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return first.get("msg", str(error)), location


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ──────────────────────── Instances ────────────────────────

def _parse_pair(i: int, j: int, n: int, location: str) -> tuple[int, int]:
    if i == j:
        raise InstanceParseError(f"loop pair ({i}, {i})", location)
    if not (0 <= i < n and 0 <= j < n):
        raise InstanceParseError(f"pair ({i}, {j}) outside 0..{n - 1}", location)
    return norm_pair(i, j)


def _parse_edges(raw: list[tuple[int, int]], n: int, field_name: str) -> frozenset[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()
    for k, (i, j) in enumerate(raw):
        location = f"{field_name}[{k}]"
        pair = _parse_pair(i, j, n, location)
        if pair in edges:
            raise InstanceParseError(f"duplicate pair {pair}", location)
        edges.add(pair)
    return frozenset(edges)


def _parse_target(spec: TargetSpec) -> TargetClass:
    if spec.kind == "all":
        return AllInvest()
    if spec.kind == "atleast":
        if spec.r is None:
            raise InstanceParseError("atleast target needs r", "target.r")
        return AtLeast(spec.r)
    if spec.members is None:
        raise InstanceParseError(f"{spec.kind} target needs members", "target.members")
    members = frozenset(spec.members)
    return ExactSet(members) if spec.kind == "exact" else SupersetOf(members)


def _target_doc(target: TargetClass) -> dict:
    if isinstance(target, AtLeast):
        return {"kind": "atleast", "r": target.r}
    if isinstance(target, (ExactSet, SupersetOf)):
        return {"kind": target.kind, "members": sorted(target.members)}
    return {"kind": "all"}


def read_instance(text: str) -> DesignInstance:
    try:
        doc = InstanceFile.model_validate_json(text)
    except ValidationError as e:
        message, location = _validation_location(e)
        raise InstanceParseError(message, location) from e

    n = doc.n
    graph = Graph(n, _parse_edges(doc.edges, n, "edges"))

    utilities: Optional[tuple[UtilityTable, ...]] = None
    if doc.utilities is not None:
        tables = []
        for k, spec in enumerate(doc.utilities):
            values = [_parse_finite(v, f"utilities[{k}].values") for v in spec.values]
            try:
                tables.append(UtilityTable(tuple(values), _parse_finite(spec.cost, f"utilities[{k}].cost")))
            except (ValueError, TypeError) as e:
                raise InstanceParseError(str(e), f"utilities[{k}]") from e
        utilities = tuple(tables)

    degree_sets: list[DegreeSet] = []
    if doc.degree_sets is not None:
        for k, spec in enumerate(doc.degree_sets):
            try:
                if isinstance(spec, list):
                    degree_sets.append(DegreeSet.of(spec, n))
                else:
                    lower, upper = spec.interval
                    degree_sets.append(DegreeSet.interval(lower, upper, n))
            except ValueError as e:
                raise InstanceParseError(str(e), f"degree_sets[{k}]") from e
    elif utilities is not None:
        degree_sets = [derive_degree_set(u) for u in utilities]
    else:
        raise InstanceParseError("either degree_sets or utilities is required", "degree_sets")

    if utilities is not None:
        if len(utilities) != len(degree_sets):
            raise InstanceParseError(f"{len(utilities)} utility tables for {len(degree_sets)} degree sets", "utilities")
        for k, table in enumerate(utilities):
            if derive_degree_set(table).members != degree_sets[k].members:
                raise InstanceParseError("degree set disagrees with the utility table", f"degree_sets[{k}]")

    entries: dict[tuple[int, int], object] = {}
    for k, (i, j, value) in enumerate(doc.costs.entries):
        location = f"costs.entries[{k}]"
        pair = _parse_pair(i, j, n, location)
        if pair in entries:
            raise InstanceParseError(f"duplicate cost entry {pair}", location)
        entries[pair] = _parse_rational(value, location)
    costs = CostMatrix(
        n,
        entries,
        _parse_rational(doc.costs.default_add, "costs.default_add"),
        _parse_rational(doc.costs.default_remove, "costs.default_remove"),
    )

    return DesignInstance(
        graph=graph,
        degree_sets=tuple(degree_sets),
        costs=costs,
        budget=_parse_rational(doc.budget, "budget"),
        target=_parse_target(doc.target),
        utilities=utilities,
        metadata=dict(doc.metadata),
    )


def _degree_set_doc(d: DegreeSet):
    if len(d) >= 2 and d.is_interval:
        return {"interval": [d.lower, d.upper]}
    return d.sorted_members()


def write_instance(inst: DesignInstance) -> str:
    doc: dict = {
        "n": inst.n,
        "edges": [list(e) for e in inst.graph.sorted_edges()],
        "degree_sets": [_degree_set_doc(d) for d in inst.degree_sets],
    }
    if inst.utilities is not None:
        doc["utilities"] = [
            {"values": [format_rational(v) for v in u.values], "cost": format_rational(u.invest_cost)}
            for u in inst.utilities
        ]
    doc["costs"] = {
        "default_add": format_rational(inst.costs.default_add),
        "default_remove": format_rational(inst.costs.default_remove),
        "entries": [[i, j, format_rational(c)] for (i, j), c in sorted(inst.costs.overrides.items())],
    }
    doc["budget"] = format_rational(inst.budget)
    doc["target"] = _target_doc(inst.target)
    if inst.metadata:
        doc["metadata"] = dict(sorted(inst.metadata.items()))
    return _dump(doc)


def load_instance(path: Path) -> DesignInstance:
    logger.debug(f"Loading instance {path}")
    return read_instance(Path(path).read_text(encoding="utf-8"))


# ──────────────────────── Solutions ────────────────────────

def write_outcome(outcome: SolveOutcome) -> str:
    doc: dict = {"status": outcome.status.value, "solver": outcome.stats.solver}
    if outcome.status == SolveStatus.FEASIBLE and outcome.solution is not None:
        sol = outcome.solution
        doc["cost"] = format_rational(sol.modification_cost)
        doc["investing"] = sol.investing.sorted_investing()
        doc["added"] = [list(e) for e in sorted(sol.added)]
        doc["removed"] = [list(e) for e in sorted(sol.removed)]
        doc["final_edges"] = [list(e) for e in sorted(sol.final_edges)]
    elif outcome.status == SolveStatus.INFEASIBLE_WITHIN_BUDGET:
        doc["min_cost"] = format_rational(outcome.min_cost)
    else:
        doc["reason"] = outcome.reason or ""
    return _dump(doc)


def write_solution(sol: Solution, solver: str = "") -> str:
    return write_outcome(SolveOutcome(SolveStatus.FEASIBLE, solution=sol, stats=SolveStats(solver=solver)))


def read_solution(text: str, n: int) -> Solution:
    try:
        doc = SolutionFile.model_validate_json(text)
    except ValidationError as e:
        message, location = _validation_location(e)
        raise InstanceParseError(message, location) from e
    if doc.status != "feasible":
        raise InstanceParseError(f"solution file records status {doc.status!r}, not a solution", "status")
    for name in ("cost", "investing", "final_edges"):
        if getattr(doc, name) is None:
            raise InstanceParseError("missing field", name)

    final_edges = _parse_edges(doc.final_edges, n, "final_edges")
    investing = [v for v in doc.investing if not 0 <= v < n]
    if investing:
        raise InstanceParseError(f"unknown players {investing}", "investing")
    return Solution(
        final_edges=final_edges,
        investing=StrategyProfile.from_set(n, doc.investing),
        modification_cost=_parse_rational(doc.cost, "cost"),
        added=_parse_edges(doc.added or [], n, "added"),
        removed=_parse_edges(doc.removed or [], n, "removed"),
    )


def write_text_atomic(path: Path, text: str) -> None:
    """Write through a temp file in the target directory, then rename over `path`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def update_manifest(path: Path, rows: list[dict]) -> None:
    """Merge rows into a JSON manifest keyed by `file`, kept sorted by file name."""
    path = Path(path)
    existing = json.loads(path.read_text(encoding="utf-8")) if path.exists() else []
    names = {row["file"] for row in rows}
    merged = [row for row in existing if row.get("file") not in names] + list(rows)
    merged.sort(key=lambda row: row["file"])
    write_text_atomic(path, _dump(merged))
