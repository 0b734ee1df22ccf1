"""Exception types shared across the package."""


class BhfiError(Exception):
    """Base class for package errors."""


class ParseError(BhfiError):
    """A file or JSON payload could not be decoded into a structure."""


class RelationViolation(BhfiError):
    """A structure or morphism failed its defining relations."""


class NotEquivalentError(BhfiError):
    """An exhaustive equivalence search ended without a certificate."""


class DivergenceError(BhfiError):
    """An iteration that should terminate (bounded inputs) did not."""


class InsufficientArityError(BhfiError):
    """A bounded verification was requested below the sound arity bound."""
