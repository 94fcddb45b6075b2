"""
Pauli Module.

Pauli strings with exact phase tracking. A PauliString is i^e * sigma_s where
s is a 2n-bit label and, per qubit q, the pair (s[2q], s[2q+1]) = (a, b)
selects sigma_ab = Z^a X^b:

    00 -> I    01 -> X    10 -> Z    11 -> ZX = iY

Phases are kept as the exponent e of i (mod 4), never as floats.
"""
from typing import FrozenSet, Iterable

import numpy as np

from ..errors import ContractError, DimensionError, DomainError
from .f2linalg import EVEN_MASK, ODD_MASK, BitVector, row_parities, row_weights

_ONE = np.uint64(1)

# Pair (a, b) <-> Hermitian letter
PAIR_TO_LETTER = {(0, 0): 'I', (0, 1): 'X', (1, 0): 'Z', (1, 1): 'Y'}
LETTER_TO_PAIR = {letter: pair for pair, letter in PAIR_TO_LETTER.items()}

# Text prefix for (e + #Y) mod 4
_PREFIXES = ('+', '+i', '-', '-i')
_PREFIX_TO_SHIFT = {'': 0, '+': 0, '+i': 1, 'i': 1, '-': 2, '-i': 3}

_SIGMA = {
    (0, 0): np.eye(2, dtype=complex),
    (0, 1): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 0): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, 1], [-1, 0]], dtype=complex),
}


def swap_pairs(words: np.ndarray) -> np.ndarray:
    """Exchange the a and b bit of every qubit pair."""
    return ((words & EVEN_MASK) << _ONE) | ((words & ODD_MASK) >> _ONE)


def y_counts(words: np.ndarray) -> np.ndarray:
    """Number of 11 pairs per packed row."""
    words = np.asarray(words, dtype=np.uint64)
    return row_weights(((words >> _ONE) & EVEN_MASK) & words)


def product_sign_bits(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    Sign bit of sigma_left * sigma_right relative to sigma_(left xor right).

    Z^a X^b Z^c X^d = (-1)^(b.c) Z^(a+c) X^(b+d), so the bit is the parity of
    the left b bits against the right a bits. Broadcasts over rows.
    """
    return row_parities(((np.asarray(left) >> _ONE) & EVEN_MASK) & np.asarray(right))


def symplectic_products(data: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Symplectic product of every packed row of data with the packed vector v."""
    return row_parities(np.asarray(data) & swap_pairs(np.asarray(v)))


def symplectic_product(u: BitVector, v: BitVector) -> int:
    """
    F2 symplectic form; 0 iff sigma_u and sigma_v commute.

    Raises:
        DimensionError: On unequal or odd lengths
    """
    if u.length != v.length or u.length % 2:
        raise DimensionError(f"need equal even lengths, got {u.length} and {v.length}")
    return int(symplectic_products(u.words.reshape(1, -1), v.words)[0])


class PauliString:
    """
    phase * sigma_bits on n qubits, with phase a fourth root of unity.
    """

    __slots__ = ('n', 'bits', 'phase_exp')

    def __init__(self, n: int, bits: BitVector, phase_exp: int = 0):
        """
        Args:
            n: Number of qubits
            bits: 2n-bit label
            phase_exp: Exponent e of the phase i^e (taken mod 4)
        """
        if bits.length != 2 * n:
            raise DimensionError(f"{n} qubits need a {2 * n}-bit label, got {bits.length}")
        self.n = n
        self.bits = bits
        self.phase_exp = int(phase_exp) % 4

    @classmethod
    def identity(cls, n: int) -> 'PauliString':
        return cls(n, BitVector.zeros(2 * n))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> 'PauliString':
        """Hermitian X, Y or Z on one qubit, identity elsewhere."""
        if not 0 <= qubit < n:
            raise DomainError(f"qubit {qubit} out of range for n={n}")
        bits = np.zeros(2 * n, dtype=np.uint8)
        bits[2 * qubit], bits[2 * qubit + 1] = LETTER_TO_PAIR[letter]
        return hermitian_from_bits(BitVector.from_bits(bits), +1)

    @classmethod
    def from_label(cls, label: str) -> 'PauliString':
        """
        Parse '+XYZ', '-IZ', 'XX' or '+iY' (Hermitian letters, optional prefix).
        """
        text = label.strip()
        body = text.lstrip('+-i')
        prefix = text[:len(text) - len(body)]
        if prefix not in _PREFIX_TO_SHIFT:
            raise ValueError(f"bad phase prefix {prefix!r} in {label!r}")
        if not body or any(ch not in LETTER_TO_PAIR for ch in body):
            raise ValueError(f"bad Pauli letters in {label!r}")
        bits = [b for ch in body for b in LETTER_TO_PAIR[ch]]
        n = len(body)
        k = body.count('Y')
        return cls(n, BitVector.from_bits(bits), _PREFIX_TO_SHIFT[prefix] - k)

    @property
    def phase(self) -> complex:
        return (1, 1j, -1, -1j)[self.phase_exp]

    @property
    def y_count(self) -> int:
        return int(y_counts(self.bits.words.reshape(1, -1))[0])

    @property
    def is_hermitian(self) -> bool:
        return (self.phase_exp - self.y_count) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 relative to the Hermitian representative of the label."""
        if not self.is_hermitian:
            raise ContractError(f"{self.to_label()} is not Hermitian")
        return 1 if (self.phase_exp + self.y_count) % 4 == 0 else -1

    def pair(self, qubit: int) -> tuple:
        return self.bits[2 * qubit], self.bits[2 * qubit + 1]

    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        w = self.bits.words
        return int(row_weights(((w | (w >> _ONE)) & EVEN_MASK).reshape(1, -1))[0])

    def is_identity(self) -> bool:
        return self.bits.is_zero()

    def commutes_with(self, other: 'PauliString') -> bool:
        return symplectic_product(self.bits, other.bits) == 0

    def negate(self) -> 'PauliString':
        return PauliString(self.n, self.bits, self.phase_exp + 2)

    def to_label(self) -> str:
        letters = ''.join(PAIR_TO_LETTER[self.pair(q)] for q in range(self.n))
        return _PREFIXES[(self.phase_exp + self.y_count) % 4] + letters

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; qubit 0 is the leftmost tensor factor."""
        out = np.array([[self.phase]], dtype=complex)
        for q in range(self.n):
            out = np.kron(out, _SIGMA[self.pair(q)])
        return out

    def __mul__(self, other: 'PauliString') -> 'PauliString':
        return multiply(self, other)

    def __neg__(self) -> 'PauliString':
        return self.negate()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.n == other.n and self.phase_exp == other.phase_exp and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.phase_exp, self.bits))

    def __str__(self) -> str:
        return self.to_label()

    def __repr__(self) -> str:
        return f"PauliString('{self.to_label()}')"


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """
    Phase-exact product p * q.

    Bits are p.bits XOR q.bits; the phase gains a -1 for every qubit where p
    carries an X factor and q a Z factor.

    Raises:
        DimensionError: If the qubit counts differ
    """
    if p.n != q.n:
        raise DimensionError(f"cannot multiply {p.n}-qubit and {q.n}-qubit Paulis")
    flip = int(product_sign_bits(p.bits.words.reshape(1, -1), q.bits.words)[0])
    return PauliString(p.n, p.bits ^ q.bits, p.phase_exp + q.phase_exp + 2 * flip)


def hermitian_from_bits(bits: BitVector, sign: int) -> PauliString:
    """
    sign * (-i)^k * sigma_bits with k the number of 11 pairs.

    The (-i)^k factor turns every sigma_11 = iY into Y, so the result is
    Hermitian and squares to the identity.

    Raises:
        DimensionError: If bits has odd length
        DomainError: If sign is not +1 or -1
    """
    if bits.length % 2:
        raise DimensionError(f"Pauli labels have even length, got {bits.length}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    k = int(y_counts(bits.words.reshape(1, -1))[0])
    return PauliString(bits.length // 2, bits, -k + (0 if sign == 1 else 2))


def pair_encoding(qubits: Iterable[int], n: int) -> BitVector:
    """Label with pair 10 (sigma_10 = Z) on every qubit of the set, 00 elsewhere."""
    bits = np.zeros(2 * n, dtype=np.uint8)
    for q in qubits:
        if not 0 <= q < n:
            raise DomainError(f"qubit {q} out of range for n={n}")
        bits[2 * q] = 1
    return BitVector.from_bits(bits)


def qubit_set(mask: int, n: int) -> FrozenSet[int]:
    """Qubits selected by an index-convention mask (qubit 0 is the top bit)."""
    return frozenset(q for q in range(n) if (mask >> (n - 1 - q)) & 1)


def restrict_commutant(basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    Packed basis of the vectors in span(basis) whose symplectic product with
    the packed label v is zero. Rows hitting v are paired off against the
    first such row, which is then dropped.
    """
    hits = np.flatnonzero(symplectic_products(basis, v))
    if hits.size == 0:
        return basis
    out = basis.copy()
    out[hits[1:]] ^= out[hits[0]]
    return np.delete(out, hits[0], axis=0)
