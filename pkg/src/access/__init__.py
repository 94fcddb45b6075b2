"""
Access package: the black-box view of an unknown state.
Supports tableau-backed (circuit or coset sampling) and dense-backed copies.
"""
from .state_access import DenseStateAccess, StateAccess, TableauStateAccess
from .access_manager import initialize_access

__all__ = ['DenseStateAccess', 'StateAccess', 'TableauStateAccess', 'initialize_access']
