"""
Tests for the copy-counting state access layer and its factory.
"""
import numpy as np
import pytest

from src import config
from src.access import DenseStateAccess, TableauStateAccess, initialize_access
from src.algebra.pauli import PauliString
from src.errors import CapacityError, ContractError, CopyBudgetExceededError, DimensionError, DomainError
from src.simulation.tableau import random_state, zero_state


@pytest.fixture
def rng():
    return np.random.default_rng(0)


# ═══════════════════════════════════════════════════════════════════
# Copy accounting
# ═══════════════════════════════════════════════════════════════════


class TestCopyAccounting:

    @pytest.mark.parametrize('backend', ['tableau', 'coset', 'dense'])
    def test_fresh_access_is_free(self, backend, rng):
        access = initialize_access(zero_state(2), backend, rng)
        assert access.copies_used == 0

    @pytest.mark.parametrize('backend', ['tableau', 'coset', 'dense'])
    def test_charges(self, backend, rng):
        access = initialize_access(zero_state(2), backend, rng)
        access.bell_sample()
        assert access.copies_used == 2
        access.measure_sign(PauliString.from_label('+ZI'))
        assert access.copies_used == 3

    def test_budget(self, rng):
        access = initialize_access(zero_state(1), 'coset', rng, max_copies=3)
        access.bell_sample()
        with pytest.raises(CopyBudgetExceededError):
            access.bell_sample()
        assert access.copies_used == 2
        access.measure_sign(PauliString.from_label('+Z'))
        assert access.copies_used == 3

    def test_non_hermitian_is_not_charged(self, rng):
        access = initialize_access(zero_state(1), 'coset', rng)
        with pytest.raises(ContractError):
            access.measure_sign(PauliString.from_label('+iX'))
        assert access.copies_used == 0

    def test_wrong_qubit_count(self, rng):
        access = initialize_access(zero_state(2), 'tableau', rng)
        with pytest.raises(DimensionError):
            access.measure_sign(PauliString.from_label('+Z'))


# ═══════════════════════════════════════════════════════════════════
# Measurement outcomes
# ═══════════════════════════════════════════════════════════════════


class TestMeasureSign:

    @pytest.mark.parametrize('backend', ['tableau', 'coset', 'dense'])
    def test_eigenstate_outcomes(self, backend, rng):
        t = zero_state(2).x(1)
        access = initialize_access(t, backend, rng)
        assert access.measure_sign(PauliString.from_label('+ZI')) == 1
        assert access.measure_sign(PauliString.from_label('+IZ')) == -1
        assert access.measure_sign(PauliString.from_label('-ZZ')) == 1

    @pytest.mark.parametrize('backend', ['tableau', 'dense'])
    def test_random_outcomes_are_fair(self, backend, rng):
        access = initialize_access(zero_state(1), backend, rng)
        outcomes = [access.measure_sign(PauliString.from_label('+X')) for _ in range(4000)]
        assert abs(outcomes.count(1) / 4000 - 0.5) < 0.03

    def test_hidden_state_is_not_disturbed(self, rng):
        t = zero_state(1)
        access = TableauStateAccess(t, rng, backend='tableau')
        for _ in range(20):
            access.measure_sign(PauliString.from_label('+X'))
        assert access.measure_sign(PauliString.from_label('+Z')) == 1
        assert t.to_labels() == ['+Z']

    def test_dense_matches_group_signs(self, rng):
        t = random_state(3, rng)
        access = initialize_access(t, 'dense', rng)
        for g in t.generators():
            assert access.measure_sign(g) == 1
            assert access.measure_sign(g.negate()) == -1


# ═══════════════════════════════════════════════════════════════════
# Factory
# ═══════════════════════════════════════════════════════════════════


class TestInitializeAccess:

    def test_backend_types(self, rng):
        assert isinstance(initialize_access(zero_state(1), 'dense', rng), DenseStateAccess)
        coset = initialize_access(zero_state(1), 'coset', rng)
        assert isinstance(coset, TableauStateAccess) and coset.backend == 'coset'

    def test_unknown_backend(self, rng):
        with pytest.raises(DomainError):
            initialize_access(zero_state(1), 'qpu', rng)

    def test_tableau_access_rejects_dense(self, rng):
        with pytest.raises(DomainError):
            TableauStateAccess(zero_state(1), rng, backend='dense')

    def test_dense_capacity(self, rng):
        with pytest.raises(CapacityError):
            initialize_access(zero_state(config.DENSE_BACKEND_MAX_QUBITS + 1), 'dense', rng)

    def test_defaults(self):
        access = initialize_access(zero_state(2))
        assert access.copies_used == 0
        assert access.max_copies is None
