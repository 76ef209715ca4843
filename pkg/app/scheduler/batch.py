import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from app.core.errors import BnpgError
from app.core.models import SolveStatus
from app.core.storage import load_instance, write_outcome, write_text_atomic
from app.services.solver import solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchJob:
    instance: Path
    output: Path
    solver: str = "auto"
    oracle_limit: Optional[int] = None
    paranoid: bool = False


@dataclass(frozen=True)
class BatchResult:
    name: str
    status: str  # a SolveStatus value, or "error"
    detail: str = ""


def solution_path(output_dir: Path, instance: Path) -> Path:
    return Path(output_dir) / f"{instance.stem}.solution.json"


def run_job(job: BatchJob) -> BatchResult:
    """Solve one instance file; failures are logged and reported, never raised."""
    name = job.instance.name
    try:
        inst = load_instance(job.instance)
        outcome = solve(inst, solver=job.solver, oracle_limit=job.oracle_limit, paranoid=job.paranoid)
        write_text_atomic(job.output, write_outcome(outcome))
    except (BnpgError, OSError, ValueError) as e:
        logger.error(f"[Batch] {name}: {e}")
        return BatchResult(name, "error", str(e))
    logger.info(f"[Batch] {name}: {outcome.status.value} via {outcome.stats.solver}")
    return BatchResult(name, outcome.status.value)


def run_batch(
    instance_dir: Path,
    output_dir: Path,
    solver: str = "auto",
    oracle_limit: Optional[int] = None,
    paranoid: bool = False,
    jobs: int = 1,
) -> list[BatchResult]:
    """Solve every *.json in `instance_dir`; results come back in file-name order whatever `jobs` is."""
    paths = sorted(Path(instance_dir).glob("*.json"))
    batch = [
        BatchJob(path, solution_path(output_dir, path), solver, oracle_limit, paranoid) for path in paths
    ]
    logger.info(f"[Batch] Solving {len(batch)} instances from {instance_dir} with {jobs} worker(s)")
    if jobs <= 1 or len(batch) <= 1:
        return [run_job(job) for job in batch]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_job, batch))


def batch_exit_code(results: list[BatchResult]) -> int:
    if any(r.status == "error" for r in results):
        return 1
    if any(r.status != SolveStatus.FEASIBLE.value for r in results):
        return 2
    return 0
