import functools
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqn.gf import (
    NotAPrimePower,
    build_field,
    is_prime_power,
    next_prime_power,
    prime_power_decomposition,
    smallest_irreducible,
)
from oracles import prime_powers_upto

SMALL_Q = [q for q in prime_powers_upto(64)]


def test_prime_power_detection_matches_sieve():
    expected = set(prime_powers_upto(5000))
    assert [q for q in range(5001) if is_prime_power(q)] == sorted(expected)


def test_decomposition_examples():
    assert prime_power_decomposition(8) == (2, 3)
    assert prime_power_decomposition(81) == (3, 4)
    assert prime_power_decomposition(6) is None
    assert prime_power_decomposition(1) is None


def test_next_prime_power():
    assert next_prime_power(719) == 727
    assert next_prime_power(1) == 2
    assert next_prime_power(7) == 8
    assert next_prime_power(9) == 11


def test_gf4_examples():
    f = build_field(4)
    assert list(f.reduction_polynomial) == [1, 1, 1]
    assert f.mul(2, 2) == 3
    assert f.mul(2, 3) == 1
    assert f.add(2, 3) == 1


def test_prime_field_examples():
    f = build_field(7)
    assert f.inv(3) == 5
    assert f.sub(2, 5) == 4


def test_not_a_prime_power():
    for q in (0, 1, 6, 12, 100):
        with pytest.raises(NotAPrimePower):
            build_field(q)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        build_field(9).inv(0)


def _roots(poly, p):
    return [x for x in range(p) if sum(c * x**i for i, c in enumerate(poly)) % p == 0]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (11, 3)])
def test_smallest_irreducible_low_degree(p, k):
    # Degree 2 and 3 polynomials are irreducible iff they have no root.
    def monic_polys():
        for tail in itertools.product(range(p), repeat=k):
            yield list(tail) + [1]

    def lex_key(poly):
        return tuple(poly)

    candidates = sorted((poly for poly in monic_polys() if not _roots(poly, p)), key=lex_key)
    assert smallest_irreducible(p, k) == candidates[0]


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    f = build_field(q)
    add, mul, neg, inv = f.add_table, f.mul_table, f.neg_table, f.inv_table
    r = np.arange(q)
    assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    assert np.array_equal(add[0], r) and np.array_equal(mul[1], r)
    assert np.all(add[r, neg] == 0)
    assert np.all(mul[r[1:], inv[1:]] == 1)
    # associativity and distributivity over all triples
    assert np.array_equal(add[add[:, :, None], r[None, None, :]], add[r[:, None, None], add[None, :, :]])
    assert np.array_equal(mul[mul[:, :, None], r[None, None, :]], mul[r[:, None, None], mul[None, :, :]])
    lhs = mul[r[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[r[:, None, None], r[None, None, :]]]
    assert np.array_equal(lhs, rhs)
    # each nonzero row of the multiplication table is a permutation
    assert all(sorted(mul[x]) == list(range(q)) for x in range(1, q))


@pytest.mark.parametrize("q", SMALL_Q)
def test_tables_match_direct_arithmetic(q):
    f = build_field(q)
    for x in range(q):
        for y in range(q):
            assert f._mul_direct(x, y) == f.mul_table[x, y]
            assert f._add_direct(x, y) == f.add_table[x, y]


@pytest.mark.parametrize("q", SMALL_Q)
def test_multiplicative_group_is_cyclic(q):
    f = build_field(q)
    g = f.generator
    seen, x = set(), 1
    for _ in range(q - 1):
        seen.add(x)
        x = f.mul(x, g)
    assert x == 1 and seen == set(range(1, q))


def test_construction_is_deterministic():
    for q in (8, 27, 49, 64, 81, 125):
        f1, f2 = build_field(q), build_field(q)
        assert f1.reduction_polynomial == f2.reduction_polynomial
        assert np.array_equal(f1.mul_table, f2.mul_table)


@functools.lru_cache(maxsize=None)
def _cached_field(q):
    return build_field(q)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([243, 1024, 2187, 3125]), st.data())
def test_large_field_axioms(q, data):
    f = _cached_field(q)
    x, y, z = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))
    assert f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))
    assert f._mul_direct(x, y) == f.mul(x, y)
    if x:
        assert f.mul(x, f.inv(x)) == 1
        assert f.div(y, x) == f.mul(y, f.inv(x))
