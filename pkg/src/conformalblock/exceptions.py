"""Exceptions for the Block conformal algebra engine."""


class ConformalError(Exception):
    """Generic exception."""


class PolynomialParseError(ConformalError):
    """Polynomial text could not be parsed."""

    def __init__(self, msg: str, *, line: int = 1, column: int = 1) -> None:
        """Initialize with the location of the offending token."""
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class DimensionMismatchError(ConformalError):
    """Vector and basis coordinates do not agree."""


class BracketTableError(ConformalError):
    """Bracket table cannot produce the requested entry."""


class WindowError(ConformalError):
    """Generator index outside of a truncation window."""


class CostGuardError(ConformalError):
    """Requested computation exceeds the supported size."""


class SymbolicParameterError(ConformalError):
    """Numeric computation requested with unbound parameters."""


class CochainError(ConformalError):
    """Malformed cochain."""


class SpecFileError(ConformalError):
    """Spec file could not be loaded."""
