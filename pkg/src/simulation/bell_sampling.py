"""
Bell Sampling Module.

Three ways to draw a Bell-sampling outcome r in {0,1}^2n from two copies of
a stabilizer state:
    tableau_bell_sample  full circuit simulation on the doubled tableau
    coset_bell_sample    uniform element of the outcome coset (fast path)
    dense_bell_sample    draw from the dense distribution table (small n)

Pair q of r is (bit of A_q, bit of B_q) after the Bell circuit, so the Bell
state |sigma_ab> on (A_q, B_q) yields the pair (a, b).
"""
import numpy as np

from ..algebra.f2linalg import BitVector
from .tableau import StabilizerTableau, group_subspace


def bell_circuit_outcome(bits_a: np.ndarray, bits_b: np.ndarray) -> BitVector:
    """Interleave per-copy measurement bits into the outcome string r."""
    r = np.empty(2 * bits_a.size, dtype=np.uint8)
    r[0::2] = bits_a
    r[1::2] = bits_b
    return BitVector.from_bits(r)


def tableau_bell_sample(t: StabilizerTableau, rng: np.random.Generator) -> BitVector:
    """
    Simulate Bell sampling on t (x) t.

    Copy A holds qubits 0..n-1 and copy B qubits n..2n-1. CNOT(A_q, B_q)
    followed by H(A_q) maps the Bell basis to the computational basis; all
    2n qubits are then measured in Z.
    """
    n = t.n
    doubled = t.tensor(t)
    for q in range(n):
        doubled.cnot(q, n + q)
    for q in range(n):
        doubled.h(q)
    bits = doubled.measure_all_z(rng)
    return bell_circuit_outcome(bits[:n], bits[n:])


def coset_bell_sample(t: StabilizerTableau, offset: BitVector,
                      rng: np.random.Generator) -> BitVector:
    """
    offset XOR a uniformly random combination of the group subspace rows.

    offset must be a valid outcome for t, e.g. one tableau_bell_sample.
    """
    basis = group_subspace(t)
    pick = rng.integers(0, 2, size=basis.nrows).astype(bool)
    return BitVector(offset.length, offset.words ^ np.bitwise_xor.reduce(basis.data[pick], axis=0))


def dense_bell_sample(dist: np.ndarray, n: int, rng: np.random.Generator) -> BitVector:
    """Draw an outcome from a Bell distribution table of length 4^n."""
    r = int(rng.choice(dist.size, p=dist / dist.sum()))
    return BitVector.from_int(r, 2 * n)
