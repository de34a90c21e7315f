"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class UidimError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(UidimError):
    """An input file could not be decoded or does not match its schema."""


class ValidationError(UidimError):
    """An argument violates a documented precondition or invariant."""


class InfeasibleError(UidimError):
    """An exact computation would exceed the configured size limits."""
