"""
Learner Module.

Identifies an unknown n-qubit stabilizer state from 5n+2 copies:

    1. Bell-sample two copies, giving r0.
    2. Bell-sample 2n more times; collect r XOR r0.
    3. Row-reduce the differences. They span the label subspace T of the
       stabilizer group iff the rank is n; otherwise report failure.
    4. For every basis label t, measure one copy in the eigenbasis of the
       Hermitian Pauli with label t to fix its sign.

Differences of outcomes lie in T because every outcome lies in one coset of T.
"""
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from ..access.state_access import StateAccess
from ..algebra.f2linalg import BitMatrix, BitVector, rref_basis
from ..algebra.pauli import hermitian_from_bits
from ..errors import ContractError, DomainError
from ..simulation.tableau import StabilizerTableau

logger = logging.getLogger(__name__)


@dataclass
class LearnReport:
    """Outcome of one learning run."""

    n: int
    success: bool
    copies_used: int
    basis_rank: int
    samples: List[BitVector] = field(repr=False)
    tableau: Optional[StabilizerTableau] = None
    duration_seconds: float = 0.0
    attempts: int = 1

    def to_record(self) -> dict:
        """Structured record for JSON reports."""
        return {
            'n': self.n,
            'success': self.success,
            'copies_used': self.copies_used,
            'basis_rank': self.basis_rank,
            'tableau': self.tableau.to_text() if self.tableau is not None else None,
            'duration_seconds': self.duration_seconds,
        }


def learn(access: StateAccess) -> LearnReport:
    """
    Run the learner once against a fresh StateAccess.

    The learner draws no randomness of its own. Every random outcome comes
    from the access, which owns its generator, so a seeded access fixes the
    whole run.

    Returns:
        LearnReport with success iff the differences reached rank n.
        copies_used is 5n+2 on success and 4n+2 on failure.

    Raises:
        ContractError: If the access was already used, or the samples do
            not lie in one coset of an n-dimensional subspace
    """
    if access.copies_used != 0:
        raise ContractError(f"learn needs a fresh StateAccess, {access.copies_used} copies already used")
    n = access.n
    start = time.perf_counter()

    r0 = access.bell_sample()
    samples = [r0] + [access.bell_sample() for _ in range(2 * n)]
    diffs = BitMatrix(2 * n, np.stack([r.words for r in samples[1:]]) ^ r0.words)
    basis = rref_basis(diffs)
    basis_rank = basis.nrows

    if basis_rank > n:
        raise ContractError(f"Bell outcome differences have rank {basis_rank} > n={n}")
    if basis_rank < n:
        logger.info("spanning failure: rank %d < n=%d", basis_rank, n)
        return LearnReport(n, False, access.copies_used, basis_rank, samples,
                           duration_seconds=time.perf_counter() - start)

    generators = []
    for t in basis.rows():
        m = hermitian_from_bits(t, +1)
        generators.append(m if access.measure_sign(m) == 1 else m.negate())
    tableau = StabilizerTableau.from_paulis(generators)

    return LearnReport(n, True, access.copies_used, basis_rank, samples, tableau,
                       duration_seconds=time.perf_counter() - start)


def learn_with_retries(make_access: Callable[[], StateAccess], max_attempts: int) -> LearnReport:
    """
    Repeat learn on fresh accesses until one run succeeds.

    Not part of the single-shot algorithm: the returned report carries the
    number of attempts and the copies spent over all of them.
    """
    if max_attempts < 1:
        raise DomainError(f"max_attempts must be >= 1, got {max_attempts}")
    total_copies = 0
    total_seconds = 0.0
    for attempt in range(1, max_attempts + 1):
        report = learn(make_access())
        total_copies += report.copies_used
        total_seconds += report.duration_seconds
        if report.success:
            break
        logger.info("attempt %d of %d failed", attempt, max_attempts)
    return replace(report, copies_used=total_copies, duration_seconds=total_seconds,
                   attempts=attempt)


def spanning_success_probability(n: int, k: int) -> float:
    """
    Probability that k uniform vectors of F2^n span F2^n:
    prod_{i=0}^{n-1} (1 - 2^(i-k)).
    """
    if n < 0 or k < 0:
        raise DomainError(f"need n, k >= 0, got n={n}, k={k}")
    if k < n:
        return 0.0
    return float(np.prod(1 - np.exp2(np.arange(n) - k)))


def spanning_failure_probability(n: int, k: int) -> float:
    """1 - spanning_success_probability(n, k), accurate when it is tiny."""
    if n < 0 or k < 0:
        raise DomainError(f"need n, k >= 0, got n={n}, k={k}")
    if k < n:
        return 1.0
    return float(-np.expm1(np.sum(np.log1p(-np.exp2(np.arange(n) - k)))))
