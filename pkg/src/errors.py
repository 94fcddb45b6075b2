"""
Error types raised across the package.

Every error derives from BellLearningError so the command-line harness can
map a whole family to one exit status.
"""
from typing import Optional


class BellLearningError(Exception):
    """Root of all package errors."""


class DimensionError(BellLearningError, ValueError):
    """Bit lengths or qubit counts of the operands do not match."""


class DomainError(BellLearningError, ValueError):
    """Argument outside its domain: qubit count, qubit index or gate name."""


class ContractError(BellLearningError, ValueError):
    """Precondition violated, e.g. measuring a non-Hermitian Pauli."""


class CapacityError(BellLearningError):
    """The dense oracle was asked for more qubits than its configured cap."""

    def __init__(self, n: int, limit: int, what: str):
        super().__init__(f"{what} supports at most {limit} qubits, got n={n}")
        self.n = n
        self.limit = limit


class NotAStabilizerStateError(BellLearningError):
    """A dense state failed a structural stabilizer-state check."""


class CopyBudgetExceededError(BellLearningError):
    """A StateAccess ran out of copies of the unknown state."""


class TableauParseError(BellLearningError, ValueError):
    """Malformed tableau text; line_number is 1-based."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number
