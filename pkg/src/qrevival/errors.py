"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numeric/runtime failures with 3, and file-schema mismatches with 4.
"""


class QRevivalError(Exception):
    """Base class for all package errors."""


class DimensionError(QRevivalError):
    """Array lengths or grids do not match the operation's contract."""


class ContractError(QRevivalError):
    """An input violates a documented precondition (e.g. unnormalized state)."""


class NumericError(QRevivalError):
    """Non-finite data, underflow, or a result outside its physical range."""


class DomainError(QRevivalError):
    """Argument outside the supported evaluation range."""


class ConvergenceError(QRevivalError):
    """An iterative refinement failed to converge within its budget."""


class GridError(QRevivalError):
    """Grid does not resolve or cover the state it is asked to represent."""


class TruncationError(QRevivalError):
    """An eigenbasis expansion missed too much probability.

    Carries the achieved completeness sum so callers can widen the basis.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class ConfigError(QRevivalError):
    """Invalid run configuration (CLI exit code 2)."""


class SchemaError(QRevivalError):
    """Input file does not match the expected schema (CLI exit code 4)."""
