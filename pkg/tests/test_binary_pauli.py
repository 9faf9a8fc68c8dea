import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from coltomo import binary_pauli as bp
from coltomo.errors import CapacityError, DimensionError, DomainError


@st.composite
def tuples(draw, n=None):
    n = n or draw(st.integers(1, 8))
    return bp.BinaryTuple(tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))))


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1))))
def test_int_roundtrip(case):
    n, v = case
    t = bp.BinaryTuple.from_int(v, n)
    assert t.to_int() == v
    assert bp.hamming_weight(t) == bin(v).count("1")


def test_bit_order_msb_first():
    assert bp.BinaryTuple.from_int(4, 3).bits == (1, 0, 0)
    assert bp.BinaryTuple((0, 1, 1)).to_int() == 3


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(tuples(n), tuples(n))))
def test_addition_and_dots(pair):
    a, b = pair
    s = a + b
    assert s.to_int() == a.to_int() ^ b.to_int()
    assert bp.dot_integer(a, b) == sum(x * y for x, y in zip(a, b))
    assert bp.dot_mod2(a, b) == bp.dot_integer(a, b) % 2
    assert bp.hamming_weight(s) == bp.hamming_weight(a) + bp.hamming_weight(b) - 2 * bp.dot_integer(a, b)


def test_tuple_errors():
    with pytest.raises(DomainError):
        bp.BinaryTuple((0, 2))
    with pytest.raises(DomainError):
        bp.BinaryTuple(())
    with pytest.raises(DomainError):
        bp.BinaryTuple.from_int(8, 3)
    with pytest.raises(DimensionError):
        bp.BinaryTuple((0, 1)) + bp.BinaryTuple((1,))
    with pytest.raises(DimensionError):
        bp.PauliMonomial(bp.BinaryTuple((0, 1)), bp.BinaryTuple((1,)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monomials_match_kronecker_products(n):
    for z, x in itertools.product(range(1 << n), repeat=2):
        np.testing.assert_array_equal(bp.monomial_matrix_int(n, z, x), oracles.monomial(n, z, x))


def test_monomial_object_and_capacity():
    p = bp.PauliMonomial(bp.BinaryTuple((1, 0)), bp.BinaryTuple((1, 1)))
    np.testing.assert_array_equal(p.matrix(), oracles.monomial(2, 2, 3))
    with pytest.raises(CapacityError):
        bp.monomial_matrix_int(11, 0, 0)
    with pytest.raises(CapacityError):
        bp.monomial_matrix_int(3, 0, 0, cap=2)
    with pytest.raises(DomainError):
        bp.check_capacity(0)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), *[st.integers(0, (1 << n) - 1)] * 4)))
def test_monomial_commutation_sign(case):
    n, a, b, c, d = case
    p = bp.monomial_matrix_int(n, a, b)
    q = bp.monomial_matrix_int(n, c, d)
    sign = (-1) ** (oracles.weight(a & d) + oracles.weight(b & c))
    np.testing.assert_array_equal(p @ q, sign * (q @ p))


@pytest.mark.parametrize("n", range(1, 9))
def test_triple_census(n):
    triples = bp.enumerate_triples(n)
    assert len(triples) == (n + 1) * (n + 2) * (n + 3) // 6
    assert sum(bp.r_mnk(n, t) for t in triples) == 4 ** n
    assert triples == sorted(triples)
    assert all(bp.is_admissible(n, t) for t in triples)


@pytest.mark.parametrize("n", range(1, 6))
def test_r_counts_pairs(n):
    census = Counter(oracles.triple_of(a, b) for a in range(1 << n) for b in range(1 << n))
    assert set(census) == set(bp.enumerate_triples(n))
    for t, count in census.items():
        assert bp.r_mnk(n, t) == count
    ids = bp.pair_triple_ids(n)
    triples = bp.enumerate_triples(n)
    for a, b in itertools.product(range(1 << n), repeat=2):
        assert triples[ids[a, b]] == oracles.triple_of(a, b)


@pytest.mark.parametrize("n", range(1, 7))
def test_canonical_pair_has_its_triple(n):
    for t in bp.enumerate_triples(n):
        a, b = bp.canonical_pair(n, t)
        assert bp.weight_triple(a, b) == t


def test_inadmissible_triples():
    for t in [(1, 0, 0), (2, 0, 1), (0, 0, 2), (3, 0, 3), (-1, 1, 0)]:
        assert not bp.is_admissible(2, t)
    with pytest.raises(DomainError):
        bp.r_mnk(2, (1, 1, 1))
    with pytest.raises(DomainError):
        bp.canonical_pair(2, (3, 3, 0))
    # k is also bounded by 2N - m - n
    assert not bp.is_admissible(2, (2, 2, 2))
    assert bp.is_admissible(2, (2, 2, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pauli_sum_and_coefficients(n, rng):
    dim = 1 << n
    coeffs = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    direct = sum(coeffs[g, d] * oracles.monomial(n, g, d) for g in range(dim) for d in range(dim))
    np.testing.assert_allclose(bp.pauli_sum(coeffs), direct, atol=1e-12)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    traces = np.array([[np.trace(a @ oracles.monomial(n, g, d)) for d in range(dim)] for g in range(dim)])
    np.testing.assert_allclose(bp.pauli_coefficients(a), traces, atol=1e-12)


def test_sign_matrix():
    h = bp.sign_matrix(3)
    np.testing.assert_array_equal(h @ h, 8 * np.eye(8))
    assert h[5, 3] == -1 and h[5, 2] == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_permutation_matrices(n, rng):
    states = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(n)]
    perm = list(rng.permutation(n))
    u = bp.qubit_permutation_matrix(n, perm)
    moved = [None] * n
    for i, s in enumerate(states):
        moved[perm[i]] = s
    np.testing.assert_allclose(u @ oracles.kron_all(s[:, None] for s in states).ravel(),
                               oracles.kron_all(s[:, None] for s in moved).ravel())
    np.testing.assert_array_equal(bp.swap_matrix(n, 0, 1) @ bp.swap_matrix(n, 0, 1), np.eye(1 << n))
    with pytest.raises(DomainError):
        bp.qubit_permutation_matrix(n, [0] * n)


def test_binom_int():
    assert bp.binom_int(4, 2) == 6
    assert bp.binom_int(3, 4) == 0
    assert bp.binom_int(3, -1) == 0
