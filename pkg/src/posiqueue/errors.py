"""Engine error types.

Every error carries a short machine-readable ``code`` so the HTTP layer can
map engine failures onto status codes without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class NotFoundError(EngineError):
    code = "not_found"


class WrongKindError(EngineError):
    """A post-only operation received a comment id, or vice versa."""

    code = "wrong_kind"


class IngestError(EngineError):
    """Malformed input lines. ``problems`` lists (line_number, message)."""

    code = "ingest_error"

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = problems
        lines = "; ".join(f"line {n}: {msg}" for n, msg in problems[:20])
        more = "" if len(problems) <= 20 else f" (+{len(problems) - 20} more)"
        super().__init__(f"{len(problems)} malformed record(s): {lines}{more}")


class ReferentialIntegrityError(EngineError):
    """Dangling references between records. ``offenders`` lists the bad ids."""

    code = "referential_integrity"

    def __init__(self, detail: str, offenders: list[str]):
        super().__init__(detail)
        self.offenders = offenders


class InsufficientDataError(EngineError):
    code = "insufficient_data"


class StratificationError(EngineError):
    code = "stratification_error"


class DegenerateTrainingError(EngineError):
    code = "degenerate_training"


class UndefinedAUCError(EngineError):
    code = "undefined_auc"


class ShapeError(EngineError):
    code = "shape_error"


class DuplicateError(EngineError):
    code = "duplicate"


class CapacityError(EngineError):
    code = "capacity"


class AlreadyVotedError(EngineError):
    code = "already_voted"


class InvalidFlairError(EngineError):
    code = "invalid_flair"


class EmptyReasonError(EngineError):
    code = "empty_reason"


class ReplayError(EngineError):
    """Corrupt action log. ``position`` is the 1-based record number."""

    code = "replay_error"

    def __init__(self, detail: str, position: int):
        super().__init__(f"record {position}: {detail}")
        self.position = position
