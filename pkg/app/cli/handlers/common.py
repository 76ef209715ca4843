import sys
from pathlib import Path
from typing import Optional

from app.core.storage import write_text_atomic

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2  # also: solution failed verification


def emit(text: str, path: Optional[Path]) -> None:
    """Machine-readable output goes to `path` (atomically) or stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_text_atomic(path, text)
