from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.groups import conjugate_subgroup, enumerate_subgroups
from twistmackey.modules import (
    AlgebraModule,
    ModuleError,
    direct_sum,
    extend_scalars,
    ideal_module,
    intertwining_failures,
    k0_class,
    k0_extension_by_ideal,
    k0_induced_map,
    mackey_decomposition_witness,
    regular_module,
    restrict_scalars,
    right_failures,
)

from conftest import galois, trivial_gring


def test_k0_maps_gf5_c2():
    R = trivial_gring(5, 1, "cyclic(2)")
    G = R.group
    f = R.algebra_hom(G.trivial, G.identity, G.whole)
    assert k0_induced_map(f, "extend").tolist() == [[1], [1]]
    assert k0_induced_map(f, "restrict").tolist() == [[1, 1]]


def test_k0_maps_gf9_c2():
    R = galois(3, 2)
    G = R.group
    f = R.algebra_hom(G.trivial, G.identity, G.whole)
    # R_θ[C2] ≅ M2(GF(3)); extending GF(9) gives the whole algebra, two simple modules
    assert k0_induced_map(f, "extend").tolist() == [[2]]
    assert k0_induced_map(f, "restrict").tolist() == [[1]]


def _homs(R):
    G = R.group
    subs = enumerate_subgroups(G)
    for H in subs:
        for K in subs:
            if H.issubset(K):
                yield R.algebra_hom(H, G.identity, K)
        for g in G.elements():
            yield R.algebra_hom(H, G.inv(g), conjugate_subgroup(g, H))


@pytest.mark.parametrize("make", [lambda: trivial_gring(7, 1, "symmetric(3)"), lambda: galois(2, 6), lambda: trivial_gring(5, 1, "symmetric(3)")])
def test_extension_oracle_and_reciprocity(make):
    R = make()
    for f in _homs(R):
        ext = k0_induced_map(f, "extend")
        res = k0_induced_map(f, "restrict")
        assert np.array_equal(ext, k0_extension_by_ideal(f))
        # Frobenius reciprocity: ext[t,c]·[End T_t] = res[c,t]·[End S_c]
        d_src = np.array([b.center_dim for b in f.source.blocks])
        d_tgt = np.array([b.center_dim for b in f.target.blocks])
        assert np.array_equal(ext * d_tgt[:, None], res.T * d_src[None, :])


def test_regular_class_and_additivity():
    R = trivial_gring(7, 1, "symmetric(3)")
    A = R.algebra().algebra
    reg = k0_class(regular_module(A))
    assert list(reg.multiplicities) == [b.matrix_size for b in A.blocks]
    ideals = [ideal_module(A, b.idempotent) for b in A.blocks]
    total = k0_class(direct_sum(*ideals))
    assert total.multiplicities == reg.multiplicities
    assert (k0_class(ideals[0]) + k0_class(ideals[1])).multiplicities == k0_class(direct_sum(ideals[0], ideals[1])).multiplicities


def test_module_validation():
    R = trivial_gring(5, 1, "cyclic(2)")
    A = R.algebra().algebra
    act = regular_module(A).action.copy()
    act[1] = np.eye(2, dtype=np.int64) * 2  # g acting as 2 breaks g·g = 1
    with pytest.raises(ModuleError):
        AlgebraModule(A, act)


def test_extend_then_restrict_dimensions():
    R = galois(2, 6)
    G = R.group
    for H in enumerate_subgroups(G):
        f = R.algebra_hom(G.trivial, G.identity, H)
        M = regular_module(f.source)
        E = extend_scalars(f, M)
        assert E.dim == H.order * M.dim
        assert restrict_scalars(f, E).dim == E.dim


def _triples(R):
    subs = enumerate_subgroups(R.group)
    return [(J, K, H) for H in subs for J in subs for K in subs if J.issubset(H) and K.issubset(H)]


def test_decomposition_witness_gf9():
    R = galois(3, 2)
    for J, K, H in _triples(R):
        rep = mackey_decomposition_witness(R, J, K, H)
        assert rep.passed, rep.failures


MUTATION_CASES = [
    (name, triple)
    for name, R in (("gf7/S3", trivial_gring(7, 1, "symmetric(3)")), ("gf64/C6", galois(2, 6)))
    for triple in _triples(R)
    # with J = K = e and a trivial action P and Q carry no structure beyond a GF(p)-space
    if not (R.is_trivial_action() and triple[0].order == triple[1].order == 1)
]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(MUTATION_CASES), st.data())
def test_perturbed_epsilon_is_caught(case, data):
    name, triple = case
    R = trivial_gring(7, 1, "symmetric(3)") if name == "gf7/S3" else galois(2, 6)
    p = R.ring.p
    rep = mackey_decomposition_witness(R, *triple)
    E = rep.epsilon
    assert not intertwining_failures(E, rep.p_module, rep.q_module)
    assert not right_failures(E, rep.p_right, rep.q_right, p)
    i = data.draw(st.integers(0, E.shape[0] - 1))
    j = data.draw(st.integers(0, E.shape[1] - 1))
    bad = E.copy()
    bad[i, j] = (bad[i, j] + 1) % p
    caught = intertwining_failures(bad, rep.p_module, rep.q_module) or right_failures(bad, rep.p_right, rep.q_right, p)
    assert caught
