"""Shared exception types.

The CLI maps these onto its exit-code contract: InputError and its
subclasses mean the request itself was bad (exit 2), NotApplicableError
means the inputs were well-formed but the question does not apply
(exit 3).  Everything else propagates as an ordinary bug.
"""


class Error(Exception):
    """Base class for all package errors."""


class InputError(Error):
    """Malformed, inconsistent or out-of-contract input."""


class ParseError(InputError):
    """A document could not be decoded into a value."""


class ValidationError(InputError):
    """A structurally well-formed value violates its invariants."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])


class LevelMismatchError(InputError):
    """Letters from distinct levels fed to a single-level reduction."""


class DeclarationMismatchError(InputError):
    """Operands carry incompatible generator cardinality declarations."""


class ProfileMismatchError(InputError):
    """Words over distinct level profiles combined."""


class InvalidReindexingError(InputError):
    """A reindexing schema is not a level-escaping bijection."""


class NotApplicableError(Error):
    """The requested verdict is undefined for these inputs."""


class BudgetError(Error):
    """An exact computation would exceed its configured expansion budget."""
