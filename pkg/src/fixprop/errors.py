"""Exception types shared across the package."""


class FixpropError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(FixpropError, ValueError):
    """Malformed structure: bad scheme, arity mismatch, invalid permutation."""


class UnsupportedInputError(FixpropError, ValueError):
    """Input outside an operation's supported fragment (e.g. non-binary constraints)."""


class InvariantViolation(FixpropError, RuntimeError):
    """A runtime monitor detected a broken contract, such as a function that
    moved the state without growing it."""


class StepLimitExceeded(FixpropError, RuntimeError):
    """An iteration ran past its configured step budget."""


class ResourceLimitError(FixpropError, RuntimeError):
    """A brute-force operation would exceed its configured size cap."""


class ParseError(FixpropError, ValueError):
    """Syntax or validation error in CSP text, with a source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
