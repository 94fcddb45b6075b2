"""
Dense Oracle Module.

Brute-force statevector reference for small n. Used to check the Bell
sampling distribution, the conjugate-state relation and the quadratic-form
description of stabilizer states against the tableau simulator.

Index convention: qubit 0 is the most significant bit of a basis index x.
Outcome tables over 2n-bit strings r use the same rule (character 0 of r is
the most significant bit).
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np
from scipy.linalg import hadamard

from .. import config
from ..algebra.f2linalg import BitMatrix, BitVector, popcount, rref
from ..algebra.pauli import PauliString, qubit_set
from ..errors import CapacityError, DimensionError, NotAStabilizerStateError
from .tableau import StabilizerTableau

logger = logging.getLogger(__name__)

_I_POWERS = np.array([1, 1j, -1, -1j])

# Bell basis in the pair layout: row 2a+b is <sigma_ab| on (A, B) indices 2xA+xB
_BELL_ROWS = np.array([
    [1, 0, 0, 1],    # sigma_00 = I
    [0, 1, 1, 0],    # sigma_01 = X
    [1, 0, 0, -1],   # sigma_10 = Z
    [0, 1, -1, 0],   # sigma_11 = ZX
], dtype=complex) / np.sqrt(2)


def _check_capacity(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise CapacityError(n, limit, what)


def _index_bits(indices: np.ndarray, width: int) -> np.ndarray:
    """(len, width) 0/1 matrix; column q is bit width-1-q of each index."""
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(indices, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.uint8)


def _pauli_masks(p: PauliString) -> Tuple[int, int]:
    """Index masks of the Z part (a bits) and X part (b bits) of p."""
    bits = p.bits.to_bits()
    weights = 1 << np.arange(p.n - 1, -1, -1, dtype=np.int64)
    return int(bits[0::2] @ weights), int(bits[1::2] @ weights)


def _walsh_hadamard(values: np.ndarray, n: int) -> np.ndarray:
    """out[s] = sum_x (-1)^popcount(s & x) values[x], one axis per qubit."""
    v = values.reshape((2,) * n) if n else values.copy()
    for axis in range(n):
        lo, hi = v.take(0, axis=axis), v.take(1, axis=axis)
        v = np.stack([lo + hi, lo - hi], axis=axis)
    return v.reshape(-1)


class StateVector:
    """
    Unit vector of 2^n amplitudes with the first nonzero amplitude real positive.
    """

    __slots__ = ('n', 'amps')

    def __init__(self, amps: np.ndarray, normalize: bool = True):
        """
        Args:
            amps: 2^n complex amplitudes
            normalize: Rescale to unit norm and fix the global phase. When
                False the amplitudes are stored as given.
        """
        amps = np.array(amps, dtype=complex).reshape(-1)
        size = amps.size
        if size == 0 or size & (size - 1):
            raise DimensionError(f"amplitude count must be a power of 2, got {size}")
        self.n = size.bit_length() - 1
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise DimensionError("the zero vector is not a state")
            amps = amps / norm
            lead = int(np.argmax(np.abs(amps) > config.AMPLITUDE_TOLERANCE))
            magnitude = abs(amps[lead])
            amps = amps * (np.conj(amps[lead]) / magnitude)
            amps[lead] = magnitude
        elif abs(np.linalg.norm(amps) - 1) > config.NORM_TOLERANCE:
            raise DimensionError("amplitudes are not unit norm")
        self.amps = amps

    @classmethod
    def basis_state(cls, n: int, index: int) -> 'StateVector':
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1
        return cls(amps)

    def conjugate(self) -> 'StateVector':
        """Entrywise complex conjugate |psi*>; conjugating twice is exact."""
        return StateVector(np.conj(self.amps), normalize=False)

    def apply_pauli(self, p: PauliString) -> np.ndarray:
        """Raw amplitudes of p|psi> (no renormalization)."""
        if p.n != self.n:
            raise DimensionError(f"{p.n}-qubit Pauli on a {self.n}-qubit state")
        a_mask, b_mask = _pauli_masks(p)
        x = np.arange(1 << self.n, dtype=np.uint64)
        signs = 1 - 2 * (popcount(x & np.uint64(a_mask)) & 1)
        return p.phase * signs * self.amps[x ^ np.uint64(b_mask)]

    def expectation(self, p: PauliString) -> complex:
        return complex(np.vdot(self.amps, self.apply_pauli(p)))

    def fidelity(self, other: 'StateVector') -> float:
        return float(abs(np.vdot(self.amps, other.amps)) ** 2)

    def dump(self) -> str:
        """One 'index real imag' line per amplitude."""
        return ''.join(f"{i} {a.real:.17g} {a.imag:.17g}\n" for i, a in enumerate(self.amps))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n == other.n and np.allclose(self.amps, other.amps, rtol=0,
                                                 atol=config.AMPLITUDE_TOLERANCE)

    __hash__ = None

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"


def from_tableau(t: StabilizerTableau) -> StateVector:
    """
    Dense state stabilized by every generator of t.

    A computational basis state on the support is found by measuring every
    qubit of a copy of t; the projectors (I + g)/2 then map it onto the state.

    Raises:
        CapacityError: If t.n exceeds the dense cap
    """
    _check_capacity(t.n, config.DENSE_MAX_QUBITS, "from_tableau")
    bits = t.copy().measure_all_z(np.random.default_rng(0))
    index = int(''.join(map(str, bits)), 2)
    state = StateVector.basis_state(t.n, index)
    amps = state.amps
    for g in t.generators():
        amps = (amps + StateVector(amps, normalize=False).apply_pauli(g)) / 2
        amps = amps / np.linalg.norm(amps)
    return StateVector(amps)


def _interleave(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """2n-bit outcome index with a_q at bit 2n-1-2q and b_q at bit 2n-2-2q."""
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for q in range(n):
        shift = n - 1 - q
        out |= ((a >> shift) & 1) << (2 * shift + 1)
        out |= ((b >> shift) & 1) << (2 * shift)
    return out


def bell_distribution(psi: StateVector) -> np.ndarray:
    """
    Bell sampling distribution of psi (x) psi over 2n-bit outcomes r.

    Entry r is |<psi| sigma_r |psi*>|^2 / 2^n, evaluated for all Z parts a at
    once with a Hadamard transform:
    <psi| sigma_ab |psi*> = sum_x (-1)^(a.x) conj(psi[x]) conj(psi[x ^ b]).

    Returns:
        Array of length 4^n indexed by the outcome integer
    """
    n = psi.n
    _check_capacity(n, config.DISTRIBUTION_MAX_QUBITS, "bell_distribution")
    size = 1 << n
    idx = np.arange(size)
    conj = np.conj(psi.amps)
    weights = conj[:, None] * conj[idx[:, None] ^ idx[None, :]]
    overlaps = hadamard(size) @ weights
    dist = np.zeros(size * size)
    a_grid, b_grid = np.meshgrid(idx, idx, indexing='ij')
    dist[_interleave(a_grid, b_grid, n).ravel()] = (np.abs(overlaps) ** 2 / size).ravel()
    return dist


def bell_distribution_via_projection(psi: StateVector) -> np.ndarray:
    """
    Same distribution as bell_distribution, computed by projecting
    |psi>|psi> onto the product Bell basis of the pairs (A_q, B_q).
    """
    n = psi.n
    _check_capacity(n, config.DISTRIBUTION_MAX_QUBITS, "bell_distribution_via_projection")
    joint = np.kron(psi.amps, psi.amps).reshape((2,) * (2 * n))
    order = [axis for q in range(n) for axis in (q, n + q)]
    joint = joint.transpose(order).reshape((4,) * n)
    for q in range(n):
        joint = np.moveaxis(np.tensordot(_BELL_ROWS, joint, axes=([1], [q])), 0, q)
    return (np.abs(joint) ** 2).reshape(-1)


def support_coset(dist: np.ndarray, n: int) -> Tuple[BitVector, BitMatrix]:
    """
    Offset (least element) and RREF basis of the support of a table over
    2n-bit strings.

    Raises:
        NotAStabilizerStateError: If the support is not an affine subspace
    """
    support = np.flatnonzero(dist > config.AMPLITUDE_TOLERANCE)
    offset = int(support[0])
    basis, pivots = rref(BitMatrix.from_bool_array(_index_bits(support ^ offset, 2 * n)))
    if support.size != 1 << len(pivots):
        raise NotAStabilizerStateError(f"support of size {support.size} is not a coset")
    return BitVector.from_int(offset, 2 * n), basis


def find_conjugation_set(psi: StateVector) -> FrozenSet[int]:
    """
    Qubit set S with Z on S mapping psi to psi* up to a global phase.

    Every subset is scored at once: <psi*| Z^S |psi> = sum_x (-1)^(S.x) psi[x]^2
    is the Walsh-Hadamard transform of psi^2. The first S with unit overlap
    wins.

    Raises:
        NotAStabilizerStateError: If no subset works
    """
    _check_capacity(psi.n, config.SEARCH_MAX_QUBITS, "find_conjugation_set")
    overlaps = np.abs(_walsh_hadamard(psi.amps ** 2, psi.n))
    hits = np.flatnonzero(overlaps >= 1 - config.AMPLITUDE_TOLERANCE)
    if hits.size == 0:
        raise NotAStabilizerStateError("no Z-type Pauli maps the state to its conjugate")
    return qubit_set(int(hits[0]), psi.n)


@dataclass(frozen=True)
class QuadraticForm:
    """
    |A|^-1/2 i^l(x) (-1)^q(x) on an affine support A.

    l(x) is the parity of x on linear_bits; q(x) = sum_{i<=j} quad_coeffs[i, j] x_i x_j.
    """

    n: int
    offset: BitVector
    basis: BitMatrix
    linear_bits: FrozenSet[int]
    quad_coeffs: np.ndarray

    @property
    def support_size(self) -> int:
        return 1 << self.basis.nrows

    def amplitudes(self) -> np.ndarray:
        """Reconstructed 2^n amplitudes."""
        x = _index_bits(np.arange(1 << self.n), self.n).astype(np.int64)
        y = x ^ self.offset.to_bits().astype(np.int64)
        basis_bits = self.basis.to_bool_array().astype(np.int64)
        pivots = np.argmax(basis_bits, axis=1) if self.basis.nrows else np.zeros(0, dtype=np.int64)
        member = np.all((y[:, pivots] @ basis_bits) % 2 == y, axis=1)
        linear = x[:, sorted(self.linear_bits)].sum(axis=1) % 2
        quad = np.einsum('xi,ij,xj->x', x, self.quad_coeffs.astype(np.int64), x) % 2
        amps = _I_POWERS[linear] * (1 - 2 * quad) / np.sqrt(self.support_size)
        return np.where(member, amps, 0)


def quadratic_form_extract(psi: StateVector) -> QuadraticForm:
    """
    Write psi as |A|^-1/2 sum_{x in A} i^l(x) (-1)^q(x) |x>.

    The offset is the least element of A, so its pivot bits are zero and the
    pivot coordinates of x are the coordinates of x within A. Phase
    exponents relative to the offset are read at offset + v_j and
    offset + v_i + v_j for the basis vectors v_j.

    Raises:
        NotAStabilizerStateError: On a non-affine support, unequal
            magnitudes, phases that are not powers of i, or a failed
            reconstruction
    """
    n = psi.n
    _check_capacity(n, config.SEARCH_MAX_QUBITS, "quadratic_form_extract")
    tol = config.AMPLITUDE_TOLERANCE
    support = np.flatnonzero(np.abs(psi.amps) > tol)
    size = support.size
    if size & (size - 1):
        raise NotAStabilizerStateError(f"support size {size} is not a power of 2")
    offset = int(support[0])
    shifted = support ^ offset
    basis, pivots = rref(BitMatrix.from_bool_array(_index_bits(shifted, n)))
    if size != 1 << len(pivots):
        raise NotAStabilizerStateError("support is not an affine subspace")
    if not np.allclose(np.abs(psi.amps[support]), 1 / np.sqrt(size), rtol=0, atol=tol):
        raise NotAStabilizerStateError("support amplitudes differ in magnitude")

    ratios = psi.amps[support] / psi.amps[offset]
    exponents = np.rint(np.angle(ratios) / (np.pi / 2)).astype(np.int64) % 4
    if not np.allclose(ratios, _I_POWERS[exponents], rtol=0, atol=1e-8):
        raise NotAStabilizerStateError("relative phases are not powers of i")
    phase_of = dict(zip(shifted.tolist(), exponents.tolist()))

    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    vectors = [int(row @ weights) for row in basis.to_bool_array().astype(np.int64)]
    linear = [phase_of[v] % 2 for v in vectors]
    half = [(phase_of[v] - linear[j]) // 2 for j, v in enumerate(vectors)]
    quad = np.zeros((n, n), dtype=np.uint8)
    for j, p in enumerate(pivots):
        quad[p, p] = half[j] % 2
        for i in range(j):
            rest = phase_of[vectors[i] ^ vectors[j]] - (linear[i] ^ linear[j]) - 2 * (half[i] + half[j])
            if rest % 2:
                raise NotAStabilizerStateError("pairwise phase is not a quadratic form")
            quad[pivots[i], p] = (rest // 2) % 2

    form = QuadraticForm(
        n=n,
        offset=BitVector.from_int(offset, n),
        basis=basis,
        linear_bits=frozenset(p for j, p in enumerate(pivots) if linear[j]),
        quad_coeffs=quad,
    )
    if abs(np.vdot(form.amplitudes(), psi.amps)) ** 2 < 1 - tol:
        raise NotAStabilizerStateError("quadratic form does not reproduce the state")
    logger.debug("quadratic form: |A|=%d S=%s", size, sorted(form.linear_bits))
    return form

