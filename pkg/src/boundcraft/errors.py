"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class BoundcraftError(Exception):
    exit_code = 1


class DomainError(BoundcraftError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 3


class ValidationError(BoundcraftError, ValueError):
    """Input data is well-formed but inconsistent with the requested analysis."""

    exit_code = 3


class ParseError(ValidationError):
    """A rollout log could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UsageError(BoundcraftError):
    exit_code = 2


class CapacityError(BoundcraftError):
    """A requested target cannot be met within the configured limits."""

    exit_code = 4
