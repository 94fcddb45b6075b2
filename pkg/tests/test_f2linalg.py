"""
Tests for the bit-packed F2 linear algebra.

Word-boundary cases (lengths around 64 and 128) are checked against plain
Python integer elimination.
"""
import numpy as np
import pytest
from scipy import stats

from src.algebra.f2linalg import (
    BitMatrix,
    BitVector,
    IncrementalBasis,
    in_span,
    pack_bits,
    popcount,
    rank,
    row_parities,
    rref,
    rref_basis,
    solve_in_span,
    unpack_bits,
)
from src.errors import DimensionError
from src.learning import spanning_success_probability


def int_rank(rows):
    """Reference F2 rank of rows given as Python ints."""
    pivots = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                break
            row ^= pivots[top]
    return len(pivots)


# ═══════════════════════════════════════════════════════════════════
# Bit vectors
# ═══════════════════════════════════════════════════════════════════


class TestBitVector:

    def test_string_round_trip(self):
        v = BitVector.from_string('1011')
        assert str(v) == '1011'
        assert v.weight() == 3
        assert v[0] == 1 and v[1] == 0

    def test_int_conversion_is_msb_first(self):
        v = BitVector.from_int(0b1011, 4)
        assert str(v) == '1011'
        assert v.to_int() == 11

    def test_int_too_large(self):
        with pytest.raises(DimensionError):
            BitVector.from_int(16, 4)

    def test_xor_and(self):
        a = BitVector.from_string('1100')
        b = BitVector.from_string('1010')
        assert str(a ^ b) == '0110'
        assert str(a & b) == '1000'

    def test_xor_length_mismatch(self):
        with pytest.raises(DimensionError):
            BitVector.from_string('10') ^ BitVector.from_string('101')

    @pytest.mark.parametrize('length', [1, 63, 64, 65, 130])
    def test_bits_round_trip_across_words(self, length):
        rng = np.random.default_rng(length)
        bits = rng.integers(0, 2, size=length)
        v = BitVector.from_bits(bits)
        np.testing.assert_array_equal(v.to_bits(), bits)
        assert v.weight() == int(bits.sum())

    def test_random_vector_clears_tail(self):
        v = BitVector.random(70, np.random.default_rng(1))
        assert int(v.words[-1]) >> 6 == 0

    def test_hash_and_equality(self):
        assert BitVector.from_string('101') == BitVector.from_string('101')
        assert len({BitVector.from_string('101'), BitVector.from_string('101')}) == 1
        assert BitVector.zeros(5).is_zero()


# ═══════════════════════════════════════════════════════════════════
# Word helpers
# ═══════════════════════════════════════════════════════════════════


class TestWordHelpers:

    def test_popcount(self):
        words = np.array([0, 1, 0xFF, 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
        np.testing.assert_array_equal(popcount(words), [0, 1, 8, 64])

    def test_row_parities(self):
        data = np.array([[3, 1], [1, 0], [0, 0]], dtype=np.uint64)
        np.testing.assert_array_equal(row_parities(data), [1, 1, 0])

    def test_pack_unpack(self):
        bits = np.random.default_rng(0).integers(0, 2, size=(5, 100)).astype(np.uint8)
        np.testing.assert_array_equal(unpack_bits(pack_bits(bits), 100), bits)

    def test_unpack_empty(self):
        assert unpack_bits(np.zeros((0, 2), dtype=np.uint64), 100).shape == (0, 100)


# ═══════════════════════════════════════════════════════════════════
# Elimination
# ═══════════════════════════════════════════════════════════════════


class TestElimination:

    def test_rank_small(self):
        assert rank(BitMatrix.from_strings(['110', '011', '101'])) == 2

    def test_rref_basis(self):
        basis = rref_basis(BitMatrix.from_strings(['110', '011']))
        assert basis.to_strings() == ['101', '011']

    def test_rref_returns_pivots(self):
        _, pivots = rref(BitMatrix.from_strings(['0011', '0110', '0101']))
        assert pivots == [1, 2]

    def test_rref_does_not_modify_input(self):
        m = BitMatrix.from_strings(['110', '011'])
        rref(m)
        assert m.to_strings() == ['110', '011']

    def test_identity_full_rank(self):
        assert rank(BitMatrix.identity(70)) == 70

    @pytest.mark.parametrize('shape', [(10, 20), (40, 40), (70, 130), (130, 65)])
    def test_rank_matches_integer_elimination(self, shape):
        rng = np.random.default_rng(sum(shape))
        m = BitMatrix.random(shape[0], shape[1], rng)
        ints = [int(s, 2) for s in m.to_strings()]
        assert rank(m) == int_rank(ints)

    def test_low_rank_product(self):
        rng = np.random.default_rng(3)
        left = rng.integers(0, 2, size=(30, 5))
        right = rng.integers(0, 2, size=(5, 90))
        m = BitMatrix.from_bool_array((left @ right) % 2)
        assert rank(m) <= 5

    def test_hstack(self):
        left = BitMatrix.from_strings(['10', '01'])
        right = BitMatrix.from_strings(['1', '0'])
        assert left.hstack(right).to_strings() == ['101', '010']

    def test_zero_matrix(self):
        assert rank(BitMatrix.from_bool_array(np.zeros((4, 6), dtype=np.uint8))) == 0
        basis = rref_basis(BitMatrix.from_strings(['0000']))
        assert basis.nrows == 0 and basis.ncols == 4

    def test_duplicate_rows_collapse(self):
        assert rref_basis(BitMatrix.from_strings(['1010', '1010'])).to_strings() == ['1010']

    def test_pivot_columns_are_cleared_above(self):
        assert rref_basis(BitMatrix.from_strings(['11', '01'])).to_strings() == ['10', '01']

    @pytest.mark.parametrize('shape', [(6, 4), (20, 20), (70, 130), (130, 65)])
    def test_rref_basis_is_idempotent(self, shape):
        rng = np.random.default_rng(7 * shape[0] + shape[1])
        basis = rref_basis(BitMatrix.random(shape[0], shape[1], rng))
        assert rref_basis(basis) == basis

    @pytest.mark.parametrize('seed', range(4))
    def test_output_rows_span_the_input(self, seed):
        rng = np.random.default_rng(seed)
        m = BitMatrix.random(12, 10, rng)
        basis = rref_basis(m)
        assert basis.nrows == int_rank([int(s, 2) for s in m.to_strings()])
        assert all(in_span(row, basis) for row in m.rows())
        rows = basis.rows()
        for i, a in enumerate(rows):
            for b in rows[i + 1:]:
                assert in_span(a ^ b, basis)
                assert a ^ b not in rows

    @pytest.mark.slow
    @pytest.mark.parametrize('n', [1, 2, 3, 5, 8])
    def test_full_rank_probability(self, n):
        rng = np.random.default_rng(n)
        trials = 10_000
        full = sum(rank(BitMatrix.random(2 * n, n, rng)) == n for _ in range(trials))
        p = spanning_success_probability(n, 2 * n)
        assert abs(full / trials - p) <= 5 * stats.binom(trials, p).std() / trials


# ═══════════════════════════════════════════════════════════════════
# Span membership
# ═══════════════════════════════════════════════════════════════════


class TestSpan:

    def test_solve_in_span(self):
        basis = rref_basis(BitMatrix.from_strings(['110', '011']))
        np.testing.assert_array_equal(solve_in_span(BitVector.from_string('110'), basis), [0, 1])
        assert solve_in_span(BitVector.from_string('100'), basis) is None

    def test_zero_is_in_every_span(self):
        basis = rref_basis(BitMatrix.from_strings(['0110']))
        assert in_span(BitVector.zeros(4), basis)

    def test_length_mismatch(self):
        basis = rref_basis(BitMatrix.from_strings(['110']))
        with pytest.raises(DimensionError):
            in_span(BitVector.from_string('10'), basis)

    def test_random_combinations_are_in_span(self):
        rng = np.random.default_rng(11)
        m = BitMatrix.random(6, 100, rng)
        basis = rref_basis(m)
        for _ in range(20):
            pick = rng.integers(0, 2, size=m.nrows).astype(bool)
            v = BitVector(100, np.bitwise_xor.reduce(m.data[pick], axis=0))
            assert in_span(v, basis)


class TestIncrementalBasis:

    def test_add_and_contains(self):
        basis = IncrementalBasis(3)
        assert basis.add(BitVector.from_string('110'))
        assert basis.add(BitVector.from_string('011'))
        assert not basis.add(BitVector.from_string('101'))
        assert basis.contains(BitVector.from_string('101'))
        assert not basis.contains(BitVector.from_string('100'))
        assert basis.rank == 2

    def test_matches_rref_basis(self):
        rng = np.random.default_rng(5)
        m = BitMatrix.random(12, 80, rng)
        basis = IncrementalBasis(80)
        for row in m.rows():
            basis.add(row)
        assert basis.basis() == rref_basis(m)
