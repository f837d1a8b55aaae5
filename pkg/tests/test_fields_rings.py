from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.fields import FiniteField, default_modulus, is_irreducible, is_primitive
from twistmackey.rings import IntegersMod, ProductRing, RingError, build_ring

FIELDS = [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 2), (2, 6)]


def _mobius(n: int) -> int:
    out, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            out = -out
        d += 1
    return -out if m > 1 else out


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducible_count_matches_necklace_formula(p, d):
    count = sum(is_irreducible(list(c) + [1], p) for c in itertools.product(range(p), repeat=d))
    expected = sum(_mobius(d // e) * p**e for e in range(1, d + 1) if d % e == 0) // d
    assert count == expected


@pytest.mark.parametrize("p,k", FIELDS)
def test_field_axioms_and_frobenius(p, k):
    F = FiniteField(p, k)
    q = p**k
    assert is_primitive(default_modulus(p, k), p) or k == 1
    assert F.is_field() and F.characteristic() == p
    assert len(F.units()) == q - 1
    # the generator's multiplicative order is q-1
    g = F.generator
    assert len({F.power(g, e) for e in range(q - 1)}) == q - 1
    frob = F.frobenius(1)
    assert F.is_automorphism(frob) is None
    powers = {tuple(F.frobenius(i)) for i in range(k)}
    assert len(powers) == k
    assert np.array_equal(F.frobenius(k), np.arange(q))


def test_gf9_with_a_squared_equals_a_plus_one():
    F = FiniteField(3, 2, modulus=[2, 2, 1])
    a = 3
    assert F.mul(a, a) == F.add(a, 1)
    assert F.element_labels[F.mul(a, a)] == "a+1"


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_vector_roundtrip_and_multiplication_matrix(pk, data):
    F = FiniteField(*pk)
    x, y = data.draw(st.integers(0, F.q - 1)), data.draw(st.integers(0, F.q - 1))
    assert F.from_vector(F.to_vector(x)) == x
    assert np.array_equal(F.multiplication_matrix(x) @ F.to_vector(y) % F.p, F.to_vector(F.mul(x, y)))
    if x:
        assert F.mul(x, F.inv(x)) == F.one


def test_integers_mod_and_products():
    Z6 = IntegersMod(6)
    assert sorted(Z6.units()) == [1, 5]
    assert not Z6.is_field()
    P = ProductRing([IntegersMod(2), IntegersMod(3)])
    assert P.size == 6 and P.characteristic() == 6
    assert all(P.component(P.mul(a, b), 1) == (P.component(a, 1) * P.component(b, 1)) % 3 for a in range(6) for b in range(6))


def test_build_ring_forms():
    assert build_ring("gf(3,2)").size == 9
    assert build_ring({"gf": [3, 2], "modulus": [2, 2, 1]}).mul(3, 3) == 4
    assert build_ring({"zmod": 4}).size == 4
    assert build_ring("product(zmod(2), gf(3,1))").size == 6
    with pytest.raises(RingError):
        build_ring("gf(4,1)")
    with pytest.raises(RingError):
        build_ring("matrix(2)")


def test_is_automorphism_reports_reason():
    F = FiniteField(3, 2)
    bad = np.arange(9)
    bad[[1, 2]] = bad[[2, 1]]  # swaps 1 and 2 but fixes a: not multiplicative
    assert F.is_automorphism(bad) is not None
