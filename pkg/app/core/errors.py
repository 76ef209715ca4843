from typing import Optional


class BnpgError(Exception):
    """Base class for every error raised by the library."""


class InstanceError(BnpgError):
    """An instance (or a solution for it) violates its structural invariants."""

    def __init__(self, message: str, diagnostics: Optional[list[str]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class InstanceParseError(InstanceError):
    """Malformed instance/solution document; `location` points at the offending field."""

    def __init__(self, message: str, location: str = ""):
        text = f"{location}: {message}" if location else message
        super().__init__(text, [text])
        self.location = location


class LimitExceededError(BnpgError):
    """An exhaustive enumeration was asked to go beyond its configured size cap."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
        self.size = size
        self.limit = limit


class GadgetError(BnpgError):
    def __init__(self, message: str, player: int):
        super().__init__(message)
        self.player = player


class EmptyDegreeSetError(GadgetError):
    def __init__(self, player: int):
        super().__init__(f"infeasible: empty degree set for player {player}", player)


class NonIntervalDegreeSetError(GadgetError):
    def __init__(self, player: int):
        super().__init__(f"non-interval degree set for player {player}", player)


class SolverPreconditionError(BnpgError):
    """The chosen solver cannot handle this instance (wrong target class or degree-set shape)."""


class WitnessError(BnpgError):
    """A certificate reconstructed from a design solution does not verify in the source graph."""
