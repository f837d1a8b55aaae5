from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from twistmackey import linalg

PRIMES = [2, 3, 5, 7]


def test_worked_example_rank_one():
    res = linalg.rref_solve(np.array([[1, 2], [2, 1]]), None, 3)
    assert res.rank == 1
    assert res.kernel.shape == (1, 2)
    assert not (np.array([[1, 2], [2, 1]]) @ res.kernel[0] % 3).any()


def test_inconsistent_system():
    res = linalg.rref_solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 5)
    assert not res.consistent
    with pytest.raises(ValueError):
        linalg.solve(np.array([[1, 1], [1, 1]]), np.array([0, 1]), 5)


def test_singular_inverse():
    with pytest.raises(ValueError):
        linalg.inverse(np.array([[1, 2], [2, 4]]), 7)


def _brute_rank(A: np.ndarray, p: int) -> int:
    """log_p of the size of the column image, by enumeration."""
    n = A.shape[1]
    image = {tuple(A @ np.array(v) % p) for v in itertools.product(range(p), repeat=n)}
    return round(np.log(len(image)) / np.log(p))


matrices = st.sampled_from(PRIMES).flatmap(
    lambda p: st.tuples(
        st.just(p),
        hnp.arrays(np.int64, st.tuples(st.integers(1, 4), st.integers(1, 4)), elements=st.integers(0, p - 1)),
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_matches_enumeration(pa):
    p, A = pa
    assert linalg.rank(A, p) == _brute_rank(A, p)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_kernel_and_rank_nullity(pa):
    p, A = pa
    K = linalg.kernel(A, p)
    assert K.shape[0] + linalg.rank(A, p) == A.shape[1]
    assert not (A @ K.T % p).any()
    if K.shape[0]:
        assert linalg.rank(K, p) == K.shape[0]


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rref_is_reduced(pa):
    p, A = pa
    R, piv = linalg.rref(A, p)
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert np.count_nonzero(R[:, c]) == 1
    assert not R[len(piv):].any()


@settings(max_examples=150, deadline=None)
@given(matrices, st.data())
def test_solve_consistent_systems(pa, data):
    p, A = pa
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = A @ x % p
    sol = linalg.solve(A, b, p)
    assert np.array_equal(A @ sol % p, b)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 5), st.data())
def test_inverse_roundtrip(p, n, data):
    A = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))).reshape(n, n)
    if linalg.rank(A, p) < n:
        return
    Ai = linalg.inverse(A, p)
    assert np.array_equal(A @ Ai % p, np.eye(n, dtype=np.int64))
