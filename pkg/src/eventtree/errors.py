"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the CLI when
reporting failures on standard error.
"""

from __future__ import annotations


class EventTreeError(Exception):
    code = "EventTreeError"


class InvalidSpace(EventTreeError):
    code = "InvalidSpace"


class NotDisjoint(EventTreeError):
    code = "NotDisjoint"


class ForeignWorld(EventTreeError):
    code = "ForeignWorld"


class UnknownComponent(EventTreeError):
    code = "UnknownComponent"


class NonAtomicHead(EventTreeError):
    code = "NonAtomicHead"


class IndexOutOfRange(EventTreeError):
    code = "IndexOutOfRange"


class NotDescending(EventTreeError):
    code = "NotDescending"


class EmptyIndexList(EventTreeError):
    code = "EmptyIndexList"


class DuplicateComponent(EventTreeError):
    code = "DuplicateComponent"


class DependentLabel(EventTreeError):
    code = "DependentLabel"


class NegativeRate(EventTreeError):
    code = "NegativeRate"


class NegativeTime(EventTreeError):
    code = "NegativeTime"


class ZeroCustomers(EventTreeError):
    code = "ZeroCustomers"


class ExactModeError(EventTreeError):
    """Raised when an irrational quantity is requested in exact mode."""

    code = "ExactModeError"


class ReductionError(EventTreeError):
    """Wraps a failure inside a sequence of reductions with its position."""

    code = "ReductionError"

    def __init__(self, step: int, cause: EventTreeError):
        super().__init__(f"reduction #{step}: {cause}")
        self.step = step
        self.cause = cause
        self.code = cause.code


class ModelError(EventTreeError):
    """A model file could not be loaded.

    ``issues`` is a list of ``(code, pointer, message)`` triples where
    ``pointer`` is a JSON pointer into the offending document.
    """

    code = "ModelError"

    def __init__(self, issues: list[tuple[str, str, str]]):
        self.issues = list(issues)
        self.code = self.issues[0][0] if self.issues else self.code
        lines = [f"{c} at {p or '/'}: {m}" for c, p, m in self.issues]
        super().__init__("; ".join(lines))
