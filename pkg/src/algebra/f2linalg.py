"""
F2 Linear Algebra Module.

Bit-packed vectors and matrices over GF(2). Rows are packed into uint64
words (bit j of a row lives in word j // 64 at bit j % 64) and all Gaussian
elimination is done with word-parallel XOR of whole rows.

Bit position 0 is the leftmost character of the ASCII form.
"""
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionError

WORD_BITS = 64

_ONE = np.uint64(1)
_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_SHIFTS = np.arange(WORD_BITS, dtype=np.uint64)

# Even / odd bit positions inside a word (pair layout used by Pauli labels)
EVEN_MASK = _M1
ODD_MASK = np.uint64(0xAAAAAAAAAAAAAAAA)


def words_for(nbits: int) -> int:
    """Number of uint64 words needed to hold nbits."""
    return (nbits + WORD_BITS - 1) // WORD_BITS


def tail_mask(nbits: int) -> np.uint64:
    """Mask of the valid bits in the last word of an nbits-long row."""
    rem = nbits % WORD_BITS
    if rem == 0:
        return _ALL_ONES
    return np.uint64((1 << rem) - 1)


def popcount(words: np.ndarray) -> np.ndarray:
    """Elementwise popcount of a uint64 array (SWAR, no numpy 2 needed)."""
    x = np.atleast_1d(np.asarray(words, dtype=np.uint64))
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return ((x * _H01) >> np.uint64(56)).astype(np.int64)


def row_weights(data: np.ndarray) -> np.ndarray:
    """Number of set bits in every row of a packed matrix."""
    if data.shape[-1] == 0:
        return np.zeros(data.shape[:-1], dtype=np.int64)
    return popcount(data).reshape(data.shape).sum(axis=-1)


def row_parities(data: np.ndarray) -> np.ndarray:
    """Parity (0/1) of the set bits in every row of a packed matrix."""
    x = np.atleast_1d(np.bitwise_xor.reduce(np.asarray(data, dtype=np.uint64), axis=-1))
    for shift in (32, 16, 8, 4, 2, 1):
        x = x ^ (x >> np.uint64(shift))
    return (x & _ONE).astype(np.uint8)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, nbits) 0/1 array into (rows, words) uint64."""
    bits = np.asarray(bits, dtype=np.uint64)
    rows, nbits = bits.shape
    nwords = words_for(nbits)
    padded = np.zeros((rows, nwords * WORD_BITS), dtype=np.uint64)
    padded[:, :nbits] = bits & _ONE
    padded = padded.reshape(rows, nwords, WORD_BITS) << _SHIFTS
    return np.bitwise_or.reduce(padded, axis=2) if nwords else np.zeros((rows, 0), np.uint64)


def unpack_bits(data: np.ndarray, nbits: int) -> np.ndarray:
    """Inverse of pack_bits: (rows, words) uint64 to (rows, nbits) uint8."""
    rows = data.shape[0]
    expanded = (data[:, :, None] >> _SHIFTS) & _ONE
    return expanded.reshape(rows, data.shape[1] * WORD_BITS)[:, :nbits].astype(np.uint8)


def first_set_bit(words: np.ndarray) -> int:
    """Position of the lowest set bit of a packed row, or -1 if it is zero."""
    nonzero = np.flatnonzero(words)
    if nonzero.size == 0:
        return -1
    w = int(nonzero[0])
    word = int(words[w])
    return w * WORD_BITS + (word & -word).bit_length() - 1


class BitVector:
    """
    Fixed-length vector over F2 packed into uint64 words.

    Values are immutable: every operation returns a fresh vector. Bits beyond
    `length` are always zero.
    """

    __slots__ = ('length', 'words')

    def __init__(self, length: int, words: Optional[np.ndarray] = None):
        """
        Args:
            length: Number of bits
            words: Packed payload; zeros when omitted
        """
        if length < 0:
            raise DimensionError(f"negative bit length {length}")
        nwords = words_for(length)
        if words is None:
            payload = np.zeros(nwords, dtype=np.uint64)
        else:
            payload = np.array(words, dtype=np.uint64).reshape(-1)
            if payload.size != nwords:
                raise DimensionError(f"{length} bits need {nwords} words, got {payload.size}")
            if nwords:
                payload[-1] &= tail_mask(length)
        payload.setflags(write=False)
        self.length = length
        self.words = payload

    @classmethod
    def zeros(cls, length: int) -> 'BitVector':
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> 'BitVector':
        """Build from a sequence of 0/1 values, position 0 first."""
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls(arr.size, pack_bits(arr.reshape(1, -1))[0])

    @classmethod
    def from_string(cls, text: str) -> 'BitVector':
        """Parse an ASCII '0'/'1' string, leftmost character is position 0."""
        if any(ch not in '01' for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits(np.frombuffer(text.encode('ascii'), dtype=np.uint8) - ord('0'))

    @classmethod
    def from_int(cls, value: int, length: int) -> 'BitVector':
        """Position 0 is the most significant bit of `value`."""
        if value < 0 or value >> length:
            raise DimensionError(f"{value} does not fit in {length} bits")
        return cls.from_string(format(value, f'0{length}b') if length else '')

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> 'BitVector':
        words = rng.integers(0, np.iinfo(np.uint64).max, size=words_for(length),
                             dtype=np.uint64, endpoint=True)
        return cls(length, words)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words.reshape(1, -1), self.length)[0]

    def to_int(self) -> int:
        return int(str(self), 2) if self.length else 0

    def weight(self) -> int:
        return int(row_weights(self.words.reshape(1, -1))[0])

    def is_zero(self) -> bool:
        return not self.words.any()

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(f"bit {index} out of range for length {self.length}")
        return int((self.words[index // WORD_BITS] >> np.uint64(index % WORD_BITS)) & _ONE)

    def __xor__(self, other: 'BitVector') -> 'BitVector':
        if self.length != other.length:
            raise DimensionError(f"cannot XOR lengths {self.length} and {other.length}")
        return BitVector(self.length, self.words ^ other.words)

    def __and__(self, other: 'BitVector') -> 'BitVector':
        if self.length != other.length:
            raise DimensionError(f"cannot AND lengths {self.length} and {other.length}")
        return BitVector(self.length, self.words & other.words)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __str__(self) -> str:
        return ''.join('1' if b else '0' for b in self.to_bits())

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


class BitMatrix:
    """
    Ordered list of equal-length bit rows, stored as a (rows, words) uint64 array.
    """

    __slots__ = ('ncols', 'data')

    def __init__(self, ncols: int, data: Optional[np.ndarray] = None):
        """
        Args:
            ncols: Bit length of every row
            data: Packed rows of shape (rows, words_for(ncols)); no rows when omitted
        """
        nwords = words_for(ncols)
        if data is None:
            data = np.zeros((0, nwords), dtype=np.uint64)
        data = np.asarray(data, dtype=np.uint64)
        if data.ndim != 2 or data.shape[1] != nwords:
            raise DimensionError(f"packed rows of {ncols} bits need {nwords} words, got shape {data.shape}")
        self.ncols = ncols
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], ncols: Optional[int] = None) -> 'BitMatrix':
        if not rows:
            if ncols is None:
                raise DimensionError("ncols is required for an empty matrix")
            return cls(ncols)
        width = rows[0].length if ncols is None else ncols
        if any(r.length != width for r in rows):
            raise DimensionError("all rows must share the same bit length")
        return cls(width, np.stack([r.words for r in rows]))

    @classmethod
    def from_strings(cls, strings: Sequence[str], ncols: Optional[int] = None) -> 'BitMatrix':
        return cls.from_rows([BitVector.from_string(s) for s in strings], ncols)

    @classmethod
    def from_bool_array(cls, bits: np.ndarray) -> 'BitMatrix':
        bits = np.asarray(bits)
        return cls(bits.shape[1], pack_bits(bits))

    @classmethod
    def identity(cls, size: int) -> 'BitMatrix':
        return cls.from_bool_array(np.eye(size, dtype=np.uint8))

    @classmethod
    def random(cls, nrows: int, ncols: int, rng: np.random.Generator) -> 'BitMatrix':
        return cls.from_bool_array(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    def to_bool_array(self) -> np.ndarray:
        return unpack_bits(self.data, self.ncols)

    def row(self, index: int) -> BitVector:
        return BitVector(self.ncols, self.data[index])

    def rows(self) -> List[BitVector]:
        return [self.row(i) for i in range(self.nrows)]

    def to_strings(self) -> List[str]:
        return [str(r) for r in self.rows()]

    def hstack(self, other: 'BitMatrix') -> 'BitMatrix':
        """Concatenate columns: row i becomes self.row(i) followed by other.row(i)."""
        if self.nrows != other.nrows:
            raise DimensionError(f"row counts differ: {self.nrows} vs {other.nrows}")
        return BitMatrix.from_bool_array(np.hstack([self.to_bool_array(), other.to_bool_array()]))

    def copy(self) -> 'BitMatrix':
        return BitMatrix(self.ncols, self.data.copy())

    def __iter__(self) -> Iterator[BitVector]:
        return iter(self.rows())

    def __len__(self) -> int:
        return self.nrows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.ncols == other.ncols and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_strings()!r}, ncols={self.ncols})"


class RowOperationListener:
    """
    Hook called by the eliminator so callers can mirror row operations on
    data of their own (e.g. Pauli phases).
    """

    def swap(self, i: int, j: int) -> None:
        pass

    def reduce(self, data: np.ndarray, pivot: int, targets: np.ndarray) -> None:
        """Called before rows `targets` are XORed with row `pivot`."""


def _eliminate(data: np.ndarray, ncols: int,
               listener: Optional[RowOperationListener] = None) -> List[int]:
    """In-place reduced row echelon form of packed rows. Returns pivot columns."""
    nrows = data.shape[0]
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        w, shift = divmod(col, WORD_BITS)
        column = (data[:, w] >> np.uint64(shift)) & _ONE
        below = np.flatnonzero(column[r:])
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
            column[[r, p]] = column[[p, r]]
            if listener is not None:
                listener.swap(r, p)
        targets = np.flatnonzero(column)
        targets = targets[targets != r]
        if targets.size:
            if listener is not None:
                listener.reduce(data, r, targets)
            data[targets] ^= data[r]
        pivots.append(col)
        r += 1
    return pivots


def rref(m: BitMatrix, listener: Optional[RowOperationListener] = None) -> Tuple[BitMatrix, List[int]]:
    """
    Reduced row echelon form with zero rows removed, plus the pivot columns.

    Args:
        m: Input matrix (not modified)
        listener: Optional hook mirroring the row operations

    Returns:
        (basis, pivots) where basis.nrows == rank(m) == len(pivots)
    """
    data = m.data.copy()
    pivots = _eliminate(data, m.ncols, listener)
    return BitMatrix(m.ncols, data[:len(pivots)].copy()), pivots


def rref_basis(m: BitMatrix) -> BitMatrix:
    """Unique RREF of m with zero rows removed; spans the same subspace."""
    return rref(m)[0]


def rank(m: BitMatrix) -> int:
    """F2 rank of m. Does not modify m."""
    return len(_eliminate(m.data.copy(), m.ncols))


def leading_columns(basis: BitMatrix) -> np.ndarray:
    """Column of the first set bit of every row (rows must be nonzero)."""
    if basis.nrows == 0:
        return np.zeros(0, dtype=np.int64)
    return np.argmax(basis.to_bool_array(), axis=1).astype(np.int64)


def solve_in_span(v: BitVector, basis: BitMatrix,
                  pivots: Optional[Sequence[int]] = None) -> Optional[np.ndarray]:
    """
    Express v as a combination of the rows of an RREF basis.

    Args:
        v: Vector to decompose
        basis: Rows in reduced row echelon form
        pivots: Leading column of each row, recomputed when omitted

    Returns:
        Sorted indices of the rows summing to v, or None if v is outside the span

    Raises:
        DimensionError: If v.length != basis.ncols
    """
    if v.length != basis.ncols:
        raise DimensionError(f"vector has {v.length} bits, basis rows have {basis.ncols}")
    cols = leading_columns(basis) if pivots is None else np.asarray(pivots, dtype=np.int64)
    picked = (v.words[cols // WORD_BITS] >> (cols % WORD_BITS).astype(np.uint64)) & _ONE
    coeffs = np.flatnonzero(picked)
    combo = np.bitwise_xor.reduce(basis.data[coeffs], axis=0)
    if not np.array_equal(combo, v.words):
        return None
    return coeffs


def in_span(v: BitVector, basis: BitMatrix) -> bool:
    """True iff v is an F2 combination of the rows of an RREF basis."""
    return solve_in_span(v, basis) is not None


class IncrementalBasis:
    """
    Reduced echelon basis grown one vector at a time.

    Keeps rows sorted by pivot with every pivot column cleared in all other
    rows, so membership is a single gather-and-XOR.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows = np.zeros((0, words_for(ncols)), dtype=np.uint64)
        self._pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return self._rows.shape[0]

    def _reduce(self, words: np.ndarray) -> np.ndarray:
        cols = self._pivots
        picked = (words[cols // WORD_BITS] >> (cols % WORD_BITS).astype(np.uint64)) & _ONE
        return words ^ np.bitwise_xor.reduce(self._rows[np.flatnonzero(picked)], axis=0)

    def contains(self, v: BitVector) -> bool:
        if v.length != self.ncols:
            raise DimensionError(f"vector has {v.length} bits, basis rows have {self.ncols}")
        return not self._reduce(v.words).any()

    def add(self, v: BitVector) -> bool:
        """Insert v; returns False when v was already in the span."""
        if v.length != self.ncols:
            raise DimensionError(f"vector has {v.length} bits, basis rows have {self.ncols}")
        reduced = self._reduce(v.words)
        lead = first_set_bit(reduced)
        if lead < 0:
            return False
        w, shift = divmod(lead, WORD_BITS)
        hits = np.flatnonzero((self._rows[:, w] >> np.uint64(shift)) & _ONE)
        self._rows[hits] ^= reduced
        slot = int(np.searchsorted(self._pivots, lead))
        self._rows = np.insert(self._rows, slot, reduced, axis=0)
        self._pivots = np.insert(self._pivots, slot, lead)
        return True

    def basis(self) -> BitMatrix:
        return BitMatrix(self.ncols, self._rows.copy())
