"""Exception types shared across the package."""


class AgaError(Exception):
    """Base class for all package errors."""


class EmbeddingUnavailable(AgaError):
    """The external embedding service could not be reached."""


class DimensionError(AgaError):
    """Vectors of mismatched dimension were combined."""


class InvalidRequest(AgaError):
    """A completion request violated its preconditions (e.g. empty prompt)."""


class ScriptMiss(AgaError):
    """No scripted response exists for a (category, key) pair.

    Signals an incomplete scenario fixture rather than a runtime fault.
    """


class BackendError(AgaError):
    """The HTTP completion backend failed."""


class ParseError(AgaError):
    """A model response could not be parsed into the expected structure."""


class RangeError(AgaError):
    """A numeric value fell outside its allowed range."""


class DecompositionError(AgaError):
    """Plan decomposition produced unusable output."""


class UnknownVerb(AgaError):
    """An action used a verb outside the supported set."""


class StoreFormatError(AgaError):
    """A persisted policy store file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class SelfDyadError(AgaError):
    """A dyad was requested for an agent paired with itself."""


class CommandSyntaxError(AgaError):
    """An action command string does not match the grammar."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class NoSuchItem(AgaError):
    """An action referenced an item id that does not exist."""


class PreconditionFailed(AgaError):
    """An action's precondition was not met; the world is unchanged."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ActivityStuck(AgaError):
    """Every retry for an activity produced a forbidden or failing command."""


class ConfigError(AgaError):
    """A scenario or simulation configuration is invalid."""
