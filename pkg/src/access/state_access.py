"""
State Access Module.

The learner observes the unknown state only through a StateAccess: Bell
sampling on two fresh copies, or measuring one fresh copy in the eigenbasis
of a Hermitian Pauli. Every call is charged to copies_used.
"""
import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from .. import config
from ..algebra.f2linalg import BitVector
from ..algebra.pauli import PauliString
from ..errors import ContractError, CopyBudgetExceededError, DimensionError, DomainError
from ..simulation.bell_sampling import coset_bell_sample, dense_bell_sample, tableau_bell_sample
from ..simulation.dense_oracle import StateVector, bell_distribution
from ..simulation.tableau import StabilizerTableau, measure_pauli

logger = logging.getLogger(__name__)


class StateAccess(ABC):
    """
    Black-box handle on copies of an n-qubit state.

    Subclasses implement _bell_sample and _measure_sign; the public methods
    enforce the contract and do the copy accounting.
    """

    def __init__(self, n: int, max_copies: Optional[int] = None):
        """
        Args:
            n: Number of qubits of the hidden state
            max_copies: Optional copy budget; exceeding it raises
                CopyBudgetExceededError
        """
        self.n = n
        self.max_copies = max_copies
        self.copies_used = 0

    def _consume(self, count: int) -> None:
        if self.max_copies is not None and self.copies_used + count > self.max_copies:
            raise CopyBudgetExceededError(
                f"need {count} more copies, {self.copies_used} of {self.max_copies} already used")
        self.copies_used += count

    def bell_sample(self) -> BitVector:
        """Bell-sample two fresh copies (2 copies)."""
        self._consume(2)
        return self._bell_sample()

    def measure_sign(self, m: PauliString) -> int:
        """
        Measure a fresh copy in the eigenbasis of m (1 copy).

        Returns:
            +1 or -1

        Raises:
            ContractError: If m is not Hermitian
        """
        if m.n != self.n:
            raise DimensionError(f"{m.n}-qubit observable for a {self.n}-qubit state")
        if not m.is_hermitian:
            raise ContractError(f"cannot measure non-Hermitian {m.to_label()}")
        self._consume(1)
        return self._measure_sign(m)

    @abstractmethod
    def _bell_sample(self) -> BitVector:
        ...

    @abstractmethod
    def _measure_sign(self, m: PauliString) -> int:
        ...


class TableauStateAccess(StateAccess):
    """
    Copies of a tableau state.

    backend 'tableau' simulates the Bell circuit for every sample; 'coset'
    simulates it once at construction (free of charge, it only fixes the
    outcome coset) and then draws uniform coset elements.
    """

    def __init__(self, tableau: StabilizerTableau, rng: np.random.Generator,
                 backend: str = 'coset', max_copies: Optional[int] = None):
        if backend not in ('tableau', 'coset'):
            raise DomainError(f"tableau access has no backend {backend!r}")
        super().__init__(tableau.n, max_copies)
        self.tableau = tableau
        self.rng = rng
        self.backend = backend
        self._offset = tableau_bell_sample(tableau, rng) if backend == 'coset' else None
        logger.debug("tableau access n=%d backend=%s", self.n, backend)

    def _bell_sample(self) -> BitVector:
        if self._offset is not None:
            return coset_bell_sample(self.tableau, self._offset, self.rng)
        return tableau_bell_sample(self.tableau, self.rng)

    def _measure_sign(self, m: PauliString) -> int:
        outcome, _ = measure_pauli(self.tableau, m, self.rng)
        return outcome


class DenseStateAccess(StateAccess):
    """Copies of a dense statevector; Bell samples come from the exact distribution."""

    def __init__(self, psi: StateVector, rng: np.random.Generator,
                 max_copies: Optional[int] = None):
        super().__init__(psi.n, max_copies)
        self.psi = psi
        self.rng = rng
        self._dist = bell_distribution(psi)

    def _bell_sample(self) -> BitVector:
        return dense_bell_sample(self._dist, self.n, self.rng)

    def _measure_sign(self, m: PauliString) -> int:
        mean = self.psi.expectation(m).real
        # Born rule; eigenstate outcomes are exact
        if abs(mean - 1) <= config.AMPLITUDE_TOLERANCE:
            return 1
        if abs(mean + 1) <= config.AMPLITUDE_TOLERANCE:
            return -1
        return 1 if self.rng.random() < (1 + mean) / 2 else -1
