"""
Stabilizer Tableau Module.

Represents an n-qubit stabilizer state by n commuting Hermitian Pauli
generators: a packed (n, 2n)-bit label matrix plus one sign bit per row.
No destabilizer rows are kept; deterministic measurement outcomes are read
off a cached canonical (RREF) form instead.

Gate rules follow the usual CHP conjugation formulas, written for the pair
layout of the pauli module (bit 2q = Z part, bit 2q+1 = X part).
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.f2linalg import (
    BitMatrix,
    BitVector,
    IncrementalBasis,
    RowOperationListener,
    WORD_BITS,
    rref,
    solve_in_span,
    unpack_bits,
)
from ..algebra.pauli import (
    PauliString,
    hermitian_from_bits,
    product_sign_bits,
    restrict_commutant,
    symplectic_products,
    y_counts,
)
from ..errors import BellLearningError, ContractError, DimensionError, DomainError, TableauParseError

logger = logging.getLogger(__name__)

_ONE = np.uint64(1)

SINGLE_QUBIT_GATES = ('H', 'S', 'X', 'Z')
TWO_QUBIT_GATES = ('CNOT', 'CZ')


@dataclass(frozen=True)
class Gate:
    """One Clifford gate: name in {H, S, X, Z, CNOT, CZ} and its qubits."""

    name: str
    qubits: Tuple[int, ...]

    def __str__(self) -> str:
        return ' '.join([self.name] + [str(q) for q in self.qubits])


def h(q: int) -> Gate:
    return Gate('H', (q,))


def s(q: int) -> Gate:
    return Gate('S', (q,))


def x(q: int) -> Gate:
    return Gate('X', (q,))


def z(q: int) -> Gate:
    return Gate('Z', (q,))


def cnot(control: int, target: int) -> Gate:
    return Gate('CNOT', (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate('CZ', (a, b))


class _PhaseTracker(RowOperationListener):
    """Carries phase exponents along an elimination of generator rows."""

    def __init__(self, exponents: np.ndarray):
        self.exponents = exponents

    def swap(self, i: int, j: int) -> None:
        self.exponents[[i, j]] = self.exponents[[j, i]]

    def reduce(self, data: np.ndarray, pivot: int, targets: np.ndarray) -> None:
        flips = product_sign_bits(data[targets], data[pivot]).astype(np.int64)
        self.exponents[targets] = (self.exponents[targets] + self.exponents[pivot] + 2 * flips) % 4


class StabilizerTableau:
    """
    n commuting Hermitian Pauli generators with +-1 signs.

    Mutating methods (apply, measure) return self so calls can be chained;
    the module-level functions copy first and leave their input untouched.
    """

    __slots__ = ('n', '_bits', '_signs', '_canonical')

    def __init__(self, n: int, bits: np.ndarray, signs: np.ndarray):
        """
        Args:
            n: Number of qubits
            bits: Packed generator labels, shape (n, words_for(2n))
            signs: Sign bit per generator, 0 for + and 1 for -
        """
        if n < 1:
            raise DomainError(f"a tableau needs n >= 1 qubits, got {n}")
        bits = np.array(bits, dtype=np.uint64)
        signs = np.array(signs, dtype=np.uint8).reshape(-1) & 1
        if bits.shape[0] != n or signs.size != n:
            raise DimensionError(f"{n} qubits need {n} generators, got {bits.shape[0]}")
        self.n = n
        self._bits = BitMatrix(2 * n, bits).data
        self._signs = signs
        self._canonical = None

    # ------------------------------------------------------------------
    # Construction and conversion
    # ------------------------------------------------------------------

    @classmethod
    def from_paulis(cls, generators: Sequence[PauliString]) -> 'StabilizerTableau':
        if not generators:
            raise DomainError("at least one generator is required")
        n = generators[0].n
        if len(generators) != n or any(g.n != n for g in generators):
            raise DimensionError(f"need exactly {n} generators on {n} qubits")
        signs = [0 if g.sign == 1 else 1 for g in generators]
        return cls(n, np.stack([g.bits.words for g in generators]), signs)

    @classmethod
    def from_labels(cls, labels: Sequence[str]) -> 'StabilizerTableau':
        return cls.from_paulis([PauliString.from_label(label) for label in labels])

    def copy(self) -> 'StabilizerTableau':
        return StabilizerTableau(self.n, self._bits, self._signs)

    @property
    def bit_matrix(self) -> BitMatrix:
        return BitMatrix(2 * self.n, self._bits.copy())

    @property
    def signs(self) -> np.ndarray:
        """+1 / -1 per generator."""
        return 1 - 2 * self._signs.astype(np.int64)

    def generator(self, index: int) -> PauliString:
        bits = BitVector(2 * self.n, self._bits[index])
        return hermitian_from_bits(bits, -1 if self._signs[index] else 1)

    def generators(self) -> List[PauliString]:
        return [self.generator(i) for i in range(self.n)]

    def to_labels(self) -> List[str]:
        return [g.to_label() for g in self.generators()]

    def tensor(self, other: 'StabilizerTableau') -> 'StabilizerTableau':
        """Tableau of self (x) other; other's qubits follow self's."""
        left = self.bit_matrix.hstack(BitMatrix.from_bool_array(np.zeros((self.n, 2 * other.n), dtype=np.uint8)))
        right = BitMatrix.from_bool_array(np.zeros((other.n, 2 * self.n), dtype=np.uint8)).hstack(other.bit_matrix)
        packed = np.vstack([left.data, right.data])
        return StabilizerTableau(self.n + other.n, packed,
                                 np.concatenate([self._signs, other._signs]))

    def _exponents(self) -> np.ndarray:
        """Phase exponent e of every row, generator = i^e sigma_bits."""
        return (2 * self._signs.astype(np.int64) - y_counts(self._bits)) % 4

    def _set_from_exponents(self, exponents: np.ndarray) -> None:
        self._signs = (((exponents + y_counts(self._bits)) % 4) // 2).astype(np.uint8)

    def _touch(self) -> None:
        self._canonical = None

    # ------------------------------------------------------------------
    # Gates
    # ------------------------------------------------------------------

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n:
            raise DomainError(f"qubit {q} out of range for n={self.n}")

    def _columns(self, q: int) -> Tuple[np.ndarray, np.ndarray]:
        """(x, z) bit columns of qubit q as uint64 0/1 arrays."""
        w, shift = divmod(2 * q, WORD_BITS)
        col = self._bits[:, w]
        zcol = (col >> np.uint64(shift)) & _ONE
        xcol = (col >> np.uint64(shift + 1)) & _ONE
        return xcol, zcol

    def _store(self, q: int, xcol: np.ndarray, zcol: np.ndarray) -> None:
        w, shift = divmod(2 * q, WORD_BITS)
        keep = ~(np.uint64(3) << np.uint64(shift))
        self._bits[:, w] = (self._bits[:, w] & keep) | (zcol << np.uint64(shift)) \
            | (xcol << np.uint64(shift + 1))

    def _flip_signs(self, mask: np.ndarray) -> None:
        self._signs ^= mask.astype(np.uint8)

    def apply(self, gate: Gate) -> 'StabilizerTableau':
        """Conjugate every generator by the gate, in place."""
        name, qubits = gate.name, gate.qubits
        if name in SINGLE_QUBIT_GATES:
            if len(qubits) != 1:
                raise DomainError(f"{name} acts on one qubit: '{gate}'")
        elif name in TWO_QUBIT_GATES:
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise DomainError(f"{name} needs two distinct qubits: '{gate}'")
        else:
            raise DomainError(f"unknown gate {name!r}")
        for q in qubits:
            self._check_qubit(q)

        if name == 'H':
            xa, za = self._columns(qubits[0])
            self._flip_signs(xa & za)
            self._store(qubits[0], za, xa)
        elif name == 'S':
            xa, za = self._columns(qubits[0])
            self._flip_signs(xa & za)
            self._store(qubits[0], xa, za ^ xa)
        elif name == 'X':
            _, za = self._columns(qubits[0])
            self._flip_signs(za)
        elif name == 'Z':
            xa, _ = self._columns(qubits[0])
            self._flip_signs(xa)
        elif name == 'CNOT':
            c, t = qubits
            xc, zc = self._columns(c)
            xt, zt = self._columns(t)
            self._flip_signs(xc & zt & (xt ^ zc ^ _ONE))
            self._store(t, xt ^ xc, zt)
            self._store(c, xc, zc ^ zt)
        else:  # CZ
            a, b = qubits
            xa, za = self._columns(a)
            xb, zb = self._columns(b)
            self._flip_signs(xa & xb & (za ^ zb))
            self._store(a, xa, za ^ xb)
            self._store(b, xb, zb ^ xa)
        self._touch()
        return self

    def h(self, q: int) -> 'StabilizerTableau':
        return self.apply(h(q))

    def s(self, q: int) -> 'StabilizerTableau':
        return self.apply(s(q))

    def x(self, q: int) -> 'StabilizerTableau':
        return self.apply(x(q))

    def z(self, q: int) -> 'StabilizerTableau':
        return self.apply(z(q))

    def cnot(self, control: int, target: int) -> 'StabilizerTableau':
        return self.apply(cnot(control, target))

    def cz(self, a: int, b: int) -> 'StabilizerTableau':
        return self.apply(cz(a, b))

    # ------------------------------------------------------------------
    # Canonical form and measurement
    # ------------------------------------------------------------------

    def _canonical_parts(self) -> Tuple[BitMatrix, List[int], np.ndarray]:
        """Cached (RREF labels, pivots, phase exponents)."""
        if self._canonical is None:
            tracker = _PhaseTracker(self._exponents())
            basis, pivots = rref(BitMatrix(2 * self.n, self._bits), tracker)
            if len(pivots) != self.n:
                raise BellLearningError(f"generator labels have rank {len(pivots)} < n={self.n}")
            self._canonical = (basis, pivots, tracker.exponents)
        return self._canonical

    def _anticommuting_rows(self, m: PauliString) -> np.ndarray:
        return np.flatnonzero(symplectic_products(self._bits, m.bits.words))

    def _check_observable(self, m: PauliString) -> None:
        if m.n != self.n:
            raise DimensionError(f"observable has {m.n} qubits, state has {self.n}")
        if not m.is_hermitian:
            raise ContractError(f"cannot measure non-Hermitian {m.to_label()}")

    def _group_element_sign(self, m: PauliString) -> int:
        """+1 / -1 for m in +-G, found by multiplying the spanning rows."""
        basis, pivots, exponents = self._canonical_parts()
        coeffs = solve_in_span(m.bits, basis, pivots)
        if coeffs is None:
            raise BellLearningError(f"{m.to_label()} commutes with every generator but is not in the group")
        rows = basis.data[coeffs]
        total = int(exponents[coeffs].sum())
        if coeffs.size > 1:
            prefix = np.bitwise_xor.accumulate(rows, axis=0)
            total += 2 * int(product_sign_bits(prefix[:-1], rows[1:]).sum())
        return 1 if total % 4 == m.phase_exp else -1

    def measure(self, m: PauliString, rng: np.random.Generator) -> int:
        """
        Measure a Hermitian Pauli in place and return the +-1 outcome.

        Deterministic when m commutes with every generator. Otherwise the
        outcome is a fair coin from rng, the lowest-index anticommuting
        generator becomes outcome * m and the other anticommuting generators
        are multiplied by it.
        """
        self._check_observable(m)
        hits = self._anticommuting_rows(m)
        if hits.size == 0:
            return self._group_element_sign(m)
        p, others = int(hits[0]), hits[1:]
        if others.size:
            exponents = self._exponents()
            flips = product_sign_bits(self._bits[others], self._bits[p]).astype(np.int64)
            exponents[others] = exponents[others] + exponents[p] + 2 * flips
            self._bits[others] ^= self._bits[p]
            self._set_from_exponents(exponents % 4)
        outcome = 1 if rng.integers(2) == 0 else -1
        self._bits[p] = m.bits.words
        self._signs[p] = 0 if outcome * m.sign == 1 else 1
        self._touch()
        return outcome

    def _x_support(self) -> np.ndarray:
        """Boolean per qubit: some generator has an X or Y factor there."""
        merged = np.bitwise_or.reduce(self._bits, axis=0).reshape(1, -1)
        return unpack_bits(merged, 2 * self.n)[0, 1::2].astype(bool)

    def measure_all_z(self, rng: np.random.Generator) -> np.ndarray:
        """
        Measure every qubit in the computational basis, in place.

        Qubits with a random outcome are measured first so the deterministic
        rest resolve against a single canonical form. Measurement order does
        not change the joint distribution since all Z's commute.

        Returns:
            uint8 array of measured bits (0 for outcome +1, 1 for -1)
        """
        outcomes = np.zeros(self.n, dtype=np.uint8)
        done = np.zeros(self.n, dtype=bool)
        while True:
            candidates = np.flatnonzero(self._x_support() & ~done)
            if candidates.size == 0:
                break
            q = int(candidates[0])
            outcomes[q] = self.measure(PauliString.single(self.n, q, 'Z'), rng) == -1
            done[q] = True
        for q in np.flatnonzero(~done):
            outcomes[q] = self.measure(PauliString.single(self.n, int(q), 'Z'), rng) == -1
        return outcomes

    # ------------------------------------------------------------------
    # Invariants, equality, text format
    # ------------------------------------------------------------------

    def _first_violation(self) -> Optional[Tuple[int, str]]:
        """(row, message) of the first generator breaking an invariant, or None."""
        identity = np.flatnonzero(~self._bits.any(axis=1))
        if identity.size:
            return int(identity[0]), f"generator {int(identity[0])} is the identity"
        for j in range(1, self.n):
            clash = np.flatnonzero(symplectic_products(self._bits[:j], self._bits[j]))
            if clash.size:
                return j, f"generators {int(clash[0])} and {j} anticommute"
        span = IncrementalBasis(2 * self.n)
        for j in range(self.n):
            if not span.add(BitVector(2 * self.n, self._bits[j])):
                return j, f"generator {j} is a product of earlier generators"
        return None

    def validate(self) -> None:
        """
        Raise ContractError unless the generators are independent, pairwise
        commuting and non-identity.
        """
        violation = self._first_violation()
        if violation is not None:
            raise ContractError(violation[1])

    def to_text(self) -> str:
        return '\n'.join([f"n={self.n}"] + self.to_labels()) + '\n'

    @classmethod
    def from_text(cls, text: str, validate: bool = True) -> 'StabilizerTableau':
        """
        Parse the tableau text format: 'n=<count>' then n signed Pauli lines.

        Raises:
            TableauParseError: With the 1-based line number of the problem
        """
        lines = text.splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if not lines:
            raise TableauParseError("empty tableau file", 1)
        header = lines[0].strip()
        if not header.startswith('n='):
            raise TableauParseError(f"expected 'n=<count>', got {header!r}", 1)
        try:
            n = int(header[2:])
        except ValueError:
            raise TableauParseError(f"bad qubit count {header[2:]!r}", 1) from None
        if n < 1:
            raise TableauParseError(f"qubit count must be >= 1, got {n}", 1)
        if len(lines) - 1 < n:
            raise TableauParseError(f"expected {n} generator lines, found {len(lines) - 1}",
                                    len(lines) + 1)
        if len(lines) - 1 > n:
            raise TableauParseError(f"unexpected line after {n} generators", n + 2)
        generators = []
        for number, line in enumerate(lines[1:], start=2):
            label = line.strip()
            if not label or label[0] not in '+-':
                raise TableauParseError(f"generator must start with '+' or '-': {label!r}", number)
            if len(label) != n + 1 or any(ch not in 'IXYZ' for ch in label[1:]):
                raise TableauParseError(f"expected {n} letters from IXYZ: {label!r}", number)
            generators.append(PauliString.from_label(label))
        tableau = cls.from_paulis(generators)
        if validate:
            violation = tableau._first_violation()
            if violation is not None:
                row, message = violation
                raise TableauParseError(message, row + 2)
        return tableau

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StabilizerTableau):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self._bits, other._bits)
                and np.array_equal(self._signs, other._signs))

    def __repr__(self) -> str:
        return f"StabilizerTableau({self.to_labels()!r})"


# ----------------------------------------------------------------------
# Functional interface (inputs are never modified)
# ----------------------------------------------------------------------

def zero_state(n: int) -> StabilizerTableau:
    """|0...0>: generator q is +Z on qubit q."""
    if n < 1:
        raise DomainError(f"zero_state needs n >= 1, got {n}")
    return StabilizerTableau.from_paulis([PauliString.single(n, q, 'Z') for q in range(n)])


def apply_gate(t: StabilizerTableau, gate: Gate) -> StabilizerTableau:
    return t.copy().apply(gate)


def apply_circuit(t: StabilizerTableau, gates: Iterable[Gate]) -> StabilizerTableau:
    out = t.copy()
    for gate in gates:
        out.apply(gate)
    return out


def measure_pauli(t: StabilizerTableau, m: PauliString,
                  rng: np.random.Generator) -> Tuple[int, StabilizerTableau]:
    """
    Measure a Hermitian Pauli on a stabilizer state.

    Returns:
        (outcome, post-measurement tableau); the same object t when the
        outcome is deterministic

    Raises:
        ContractError: If m is not Hermitian
    """
    t._check_observable(m)
    if t._anticommuting_rows(m).size == 0:
        return t._group_element_sign(m), t
    post = t.copy()
    outcome = post.measure(m, rng)
    return outcome, post


def stabilizer_sign(t: StabilizerTableau, m: PauliString) -> int:
    """+1 or -1 if +-m stabilizes the state, 0 if the outcome of m is random."""
    t._check_observable(m)
    if t._anticommuting_rows(m).size:
        return 0
    return t._group_element_sign(m)


def canonical_form(t: StabilizerTableau) -> StabilizerTableau:
    """
    Generators in RREF with signs carried through the row operations.
    Two tableaux describe the same state iff their canonical forms are equal.
    """
    basis, _, exponents = t._canonical_parts()
    out = StabilizerTableau(t.n, basis.data, np.zeros(t.n, dtype=np.uint8))
    out._set_from_exponents(exponents)
    return out


def same_state(a: StabilizerTableau, b: StabilizerTableau) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


def group_subspace(t: StabilizerTableau) -> BitMatrix:
    """RREF basis of the generator labels (the subspace T); rank exactly n."""
    basis, _, _ = t._canonical_parts()
    return basis.copy()


def random_state(n: int, rng: np.random.Generator) -> StabilizerTableau:
    """
    Uniformly random n-qubit stabilizer state.

    Generator k is uniform over the labels commuting with generators
    1..k-1 minus their span; every stabilizer group has the same number of
    ordered generating sequences, so the group is uniform, and the signs are
    independent fair coins.
    """
    if n < 1:
        raise DomainError(f"random_state needs n >= 1, got {n}")
    commutant = BitMatrix.identity(2 * n).data
    span = IncrementalBasis(2 * n)
    rows = []
    for _ in range(n):
        while True:
            pick = rng.integers(0, 2, size=commutant.shape[0]).astype(bool)
            candidate = BitVector(2 * n, np.bitwise_xor.reduce(commutant[pick], axis=0))
            if not span.contains(candidate):
                break
        span.add(candidate)
        rows.append(candidate.words)
        commutant = restrict_commutant(commutant, candidate.words)
    signs = rng.integers(0, 2, size=n).astype(np.uint8)
    logger.debug("sampled random %d-qubit stabilizer state", n)
    return StabilizerTableau(n, np.stack(rows), signs)
