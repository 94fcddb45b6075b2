"""
Simulation package for stabilizer states.
Provides the tableau simulator and the dense statevector oracle used to check it.
"""
from .tableau import (
    Gate,
    StabilizerTableau,
    apply_circuit,
    apply_gate,
    canonical_form,
    group_subspace,
    measure_pauli,
    random_state,
    same_state,
    zero_state,
)
from .bell_sampling import coset_bell_sample, dense_bell_sample, tableau_bell_sample
from .dense_oracle import (
    QuadraticForm,
    StateVector,
    bell_distribution,
    bell_distribution_via_projection,
    find_conjugation_set,
    from_tableau,
    quadratic_form_extract,
)

__all__ = [
    'Gate', 'StabilizerTableau', 'apply_circuit', 'apply_gate', 'canonical_form',
    'group_subspace', 'measure_pauli', 'random_state', 'same_state', 'zero_state',
    'QuadraticForm', 'StateVector', 'bell_distribution', 'bell_distribution_via_projection',
    'find_conjugation_set', 'from_tableau', 'quadratic_form_extract',
    'coset_bell_sample', 'dense_bell_sample', 'tableau_bell_sample',
]
