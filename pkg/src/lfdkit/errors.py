"""Shared exception types."""


class LfdError(Exception):
    """Base class for all library errors."""


class ParseError(LfdError):
    """Raised on malformed surface syntax."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class VocabularyError(LfdError):
    """Unknown symbol, arity mismatch, or an ill-formed vocabulary."""


class UnsupportedAtomError(LfdError):
    """An operation restricted to the core language met an extended atom."""


class EvaluationError(LfdError):
    """Semantic evaluation was asked something it refuses to answer."""


class AssignmentNotInTeam(EvaluationError):
    """Evaluation point must be one of the team's assignments."""


class ResourceCapError(LfdError):
    """A documented resource cap would be exceeded."""


class ConstructionError(LfdError):
    """An internal construction produced an object failing its own checks."""
