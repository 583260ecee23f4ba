"""
Exception hierarchy for the tagging simulator
Every error raised on purpose derives from TaggingSimulatorError
"""

from typing import Any, Optional


class TaggingSimulatorError(ValueError):
    """Base class for all simulator and analytics errors"""


class RecordValidationError(TaggingSimulatorError):
    """A bookmark record breaks a core invariant"""


class BoundsError(TaggingSimulatorError):
    """An index lies outside the valid range"""


class EmptyInputError(TaggingSimulatorError):
    """An operation received an empty collection it cannot work on"""


class ArgumentError(TaggingSimulatorError):
    """An argument value is not acceptable"""


class ResourceLimitError(TaggingSimulatorError):
    """The requested computation exceeds a hard size guard"""


class ConfigurationError(TaggingSimulatorError):
    """A configuration cannot produce a valid run"""


class DegenerateInputError(TaggingSimulatorError):
    """Input has zero variance or is otherwise unusable for a fit"""


class DomainError(TaggingSimulatorError):
    """A value lies outside the mathematical domain of an operation"""


class InsufficientDataError(TaggingSimulatorError):
    """Too little data for a statistic; the partial result is kept"""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class LogParseError(TaggingSimulatorError):
    """A bookmark log line could not be parsed"""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason
