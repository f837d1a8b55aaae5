from __future__ import annotations

from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.algebra import (
    AlgebraHom,
    HomError,
    StructuralError,
    StructureAlgebra,
    algebra_center,
    identity_hom,
    primitive_central_idempotents,
)
from twistmackey.fields import FiniteField
from twistmackey.groups import cyclic, symmetric
from twistmackey.mackey import matrix_algebra, group_algebra


def test_gf5_c2_idempotents():
    A = group_algebra(FiniteField(5), cyclic(2).whole)
    idems = primitive_central_idempotents(A)
    assert [e.tolist() for e in idems] == [[3, 2], [3, 3]]  # (1 ∓ g)/2


def testmatrix_algebra_is_one_block():
    A = matrix_algebra(3, 2)
    (b,) = A.blocks
    assert (b.block_dim, b.center_dim, b.matrix_size) == (4, 1, 2)


def test_field_extension_is_one_commutative_block():
    F = FiniteField(2, 2)
    A = group_algebra(F, cyclic(1).whole)  # GF(4) over GF(2)
    (b,) = A.blocks
    assert (b.block_dim, b.center_dim, b.matrix_size) == (2, 2, 1)


def test_non_semisimple_is_rejected():
    A = group_algebra(FiniteField(2), cyclic(2).whole)
    with pytest.raises(StructuralError):
        _ = A.blocks


def test_s3_over_gf7_wedderburn():
    A = group_algebra(FiniteField(7), symmetric(3).whole)
    shapes = sorted((b.block_dim, b.matrix_size) for b in A.blocks)
    assert shapes == [(1, 1), (1, 1), (4, 2)]
    assert algebra_center(A).shape[0] == 3  # number of conjugacy classes


def _cyclotomic_cosets(p: int, n: int) -> list[int]:
    seen, sizes = set(), []
    for a in range(n):
        if a in seen:
            continue
        orbit, x = set(), a
        while x not in orbit:
            orbit.add(x)
            x = x * p % n
        seen |= orbit
        sizes.append(len(orbit))
    return sorted(sizes)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 9))
def test_cyclic_group_algebra_blocks_match_cyclotomic_cosets(p, n):
    if gcd(p, n) != 1:
        return
    A = group_algebra(FiniteField(p), cyclic(n).whole)
    blocks = A.blocks
    assert sorted(b.center_dim for b in blocks) == _cyclotomic_cosets(p, n)
    assert all(b.matrix_size == 1 for b in blocks)
    assert sum(b.block_dim for b in blocks) == A.dim
    idems = [b.idempotent for b in blocks]
    for i, e in enumerate(idems):
        for j, f in enumerate(idems):
            prod = A.mul(e, f)
            assert np.array_equal(prod, e if i == j else A.zero())


def test_structure_constants_validation():
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = 1
    c[1, 1, 0] = 1  # x² = 1 over GF(3): fine
    A = StructureAlgebra(3, c, np.array([1, 0]))
    assert A.is_commutative()
    bad = c.copy()
    bad[0, 1, 1] = 0  # unit no longer acts on x
    with pytest.raises(ValueError):
        StructureAlgebra(3, bad, np.array([1, 0]))


def test_algebra_hom_checks():
    A = group_algebra(FiniteField(5), cyclic(2).whole)
    ident = identity_hom(A)
    assert np.array_equal(ident(np.array([2, 3])), [2, 3])
    with pytest.raises(HomError):
        AlgebraHom(A, A, np.array([[1, 0], [0, 0]]))  # kills g but keeps 1: not multiplicative (g² = 1)
