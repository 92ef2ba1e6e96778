"""Exception types raised by the finring operations."""


class FinringError(Exception):
    """Base class for all domain errors."""


class ShapeMismatch(FinringError):
    """Operand or table does not conform to the expected additive shape."""


class CharIncompatible(FinringError):
    """Structure constant violates the characteristic-compatibility congruence."""

    def __init__(self, i: int, j: int, l: int, message: str = ""):
        self.witness = (i, j, l)
        super().__init__(message or f"c[{i}][{j}][{l}] incompatible with characteristics")


class NotAssociative(FinringError):
    """Associativity fails on a basis triple."""

    def __init__(self, i: int, j: int, k: int, message: str = ""):
        self.witness = (i, j, k)
        super().__init__(message or f"associativity fails on basis triple ({i},{j},{k})")


class NotAnIdeal(FinringError):
    """Subgroup passed to quotient_ring is not a two-sided ideal."""


class NoIdentity(FinringError):
    """Operation requires a multiplicative identity."""


class ParameterOutOfRange(FinringError):
    """Numeric parameter outside its documented domain."""


class InvalidDims(FinringError):
    """Dimension triple violates s <= t+1 or s <= r."""


class GenerationFailed(FinringError):
    """Two-generation witness search exhausted its candidates."""


class NotIdempotentModJ(FinringError):
    """Element is not idempotent modulo the Jacobson radical."""


class NilpotentInput(FinringError):
    """Operation requires a non-nilpotent ring."""


class InvalidSextuple(FinringError):
    """Sextuple record violates the module axioms."""


class NotNilpotent(FinringError):
    """Operation requires a nilpotent algebra."""


class NotCubeZero(FinringError):
    """Operation requires an algebra with cube zero."""


class InvalidBasisChange(FinringError):
    """Substitution does not map the basis to a valid basis."""


class BudgetExceeded(FinringError):
    """Requested enumeration exceeds the configured order budget."""


class ParseError(FinringError):
    """Malformed text record."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ChecksumMismatch(FinringError):
    """Census file body does not match its recorded digest."""
