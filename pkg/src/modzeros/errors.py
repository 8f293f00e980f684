"""Exception types shared across the package."""


class ModzerosError(Exception):
    """Base class for all package errors."""


class InvariantError(ModzerosError):
    """Coefficient or file data violates a structural invariant.

    Carries the offending index when one exists.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class FormatError(ModzerosError):
    """Malformed newform file or serialized report."""


class PoleError(ModzerosError):
    """Special function evaluated at a pole."""


class ConvergenceError(ModzerosError):
    """An iteration or subdivision budget was exhausted."""


class InsufficientTruncationError(ModzerosError):
    """Too few coefficients for the requested evaluation."""

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class RealnessError(ModzerosError):
    """The rotated completed L-value has an unexpectedly large discarded
    component; signals a wrong sign or an insufficient truncation."""


class AmbiguousSignError(ModzerosError):
    """Numerical sign detection could not separate the two hypotheses."""


class IncompleteZeroListError(ModzerosError):
    """An operation requiring a complete zero list received a partial one."""


class WorkBudgetError(ModzerosError):
    """A configured work bound (enumeration size, sieve memory) was exceeded."""
