"""
Access Manager Module.
Builds the StateAccess for a hidden state from the configured backend.
"""
import logging
from typing import Optional

import numpy as np

from .. import config
from ..errors import CapacityError, DomainError
from ..simulation.dense_oracle import from_tableau
from ..simulation.tableau import StabilizerTableau
from .state_access import DenseStateAccess, StateAccess, TableauStateAccess

logger = logging.getLogger(__name__)


def initialize_access(tableau: StabilizerTableau,
                      backend: Optional[str] = None,
                      rng: Optional[np.random.Generator] = None,
                      max_copies: Optional[int] = None) -> StateAccess:
    """
    Wrap a hidden stabilizer state in the requested access backend.

    Args:
        tableau: The hidden state
        backend: 'coset', 'tableau' or 'dense'; config.DEFAULT_BACKEND if None
        rng: Randomness of the simulated measurements; seed 0 if None
        max_copies: Optional copy budget

    Returns:
        A fresh StateAccess with copies_used == 0

    Raises:
        DomainError: On an unknown backend
        CapacityError: If the dense backend is asked for too many qubits
    """
    if backend is None:
        backend = config.DEFAULT_BACKEND
    if rng is None:
        rng = np.random.default_rng(config.DEFAULT_SEED)

    if backend not in config.BACKENDS:
        raise DomainError(f"unknown backend {backend!r}, choose from {', '.join(config.BACKENDS)}")

    if backend == 'dense':
        if tableau.n > config.DENSE_BACKEND_MAX_QUBITS:
            raise CapacityError(tableau.n, config.DENSE_BACKEND_MAX_QUBITS, "dense backend")
        access = DenseStateAccess(from_tableau(tableau), rng, max_copies)
    else:
        access = TableauStateAccess(tableau, rng, backend, max_copies)

    logger.debug("initialized %s access for n=%d", backend, tableau.n)
    return access
