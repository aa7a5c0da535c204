"""
Exceptions raised by the SmartWS stack.

Parsing problems derive from `ValueError` so they behave like the validation
errors raised elsewhere; transport problems keep the failure kind apart so the
engine can record them without guessing.
"""


# region base
class SmartWSError(Exception):
    """Root of every error raised on purpose by this package."""
# endregion


# region knowledge base
class KbSyntaxError(SmartWSError, ValueError):
    """Syntax error in the knowledge base text format."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UnknownPrefixError(KbSyntaxError):
    """A prefixed name uses a prefix that was never declared."""


class MalformedTermError(KbSyntaxError):
    """An IRI or literal is syntactically present but invalid."""
# endregion


# region descriptions
class DescriptionError(SmartWSError, ValueError):
    """A description document could not be parsed."""


class DescriptionValidationError(DescriptionError):
    """A description parsed but violates the description invariants."""

    def __init__(self, name: str, violations: list[str]):
        super().__init__(f"Invalid description {name!r}: " + "; ".join(violations))
        self.name = name
        self.violations = violations


class RuleSyntaxError(SmartWSError, ValueError):
    """A smart rule block is malformed."""


class GuardTypeError(SmartWSError, TypeError):
    """A guard compared values whose datatypes are not comparable."""
# endregion


# region transport
class TransportError(SmartWSError):
    """Invoking a remote SmartWS failed."""


class ConnectionFailure(TransportError):
    """The endpoint could not be reached at all."""


class HttpStatusError(TransportError):
    """The endpoint answered with a non-200 status."""

    def __init__(self, status_code: int, message: str):
        super().__init__(f"HTTP {status_code}: {message}")
        self.status_code = status_code
        self.message = message


class PreconditionRejected(HttpStatusError):
    """The endpoint rejected the request graph with 422."""


class BodyParseError(TransportError):
    """A 200 response body is not a valid graph."""


class HostStartupError(SmartWSError):
    """A service host could not start serving."""
# endregion
