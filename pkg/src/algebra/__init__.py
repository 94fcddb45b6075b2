"""
Algebra package: bit-packed linear algebra over F2 and Pauli strings.
"""
from .f2linalg import BitMatrix, BitVector, IncrementalBasis, in_span, rank, rref, rref_basis, solve_in_span
from .pauli import PauliString, hermitian_from_bits, multiply, pair_encoding, symplectic_product

__all__ = [
    'BitMatrix', 'BitVector', 'IncrementalBasis', 'in_span', 'rank', 'rref', 'rref_basis',
    'solve_in_span', 'PauliString', 'hermitian_from_bits', 'multiply', 'pair_encoding',
    'symplectic_product',
]
