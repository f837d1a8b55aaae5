from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.groups import (
    ContainmentError,
    GroupError,
    GroupSizeError,
    build_group,
    class_representative,
    conjugate_subgroup,
    cyclic,
    dihedral,
    double_coset,
    double_coset_reps,
    enumerate_subgroups,
    intersect,
    left_coset_reps,
    refined_transversal,
    right_coset_reps,
    subconjugacy_witness,
    subgroup_classes,
    symmetric,
    upper_conjugate,
)

from conftest import group

# (group, #subgroups, #conjugacy classes of subgroups), counted by hand
KNOWN = [
    ("cyclic(1)", 1, 1),
    ("cyclic(6)", 4, 4),
    ("symmetric(3)", 6, 4),
    ("dihedral(4)", 10, 8),
    ("product(cyclic(2),cyclic(2))", 5, 5),
    ("symmetric(4)", 30, 11),
]


@pytest.mark.parametrize("spec,n_subs,n_classes", KNOWN)
def test_subgroup_counts(spec, n_subs, n_classes):
    G = build_group(spec)
    assert len(enumerate_subgroups(G)) == n_subs
    assert len(subgroup_classes(G)) == n_classes


@pytest.mark.parametrize("spec", [s for s, _, _ in KNOWN])
def test_group_axioms(spec):
    G = build_group(spec)
    T = G.table
    n = G.order
    assert np.array_equal(T[T], T[:, T])  # (ab)c = a(bc)
    assert all(T[a, G.inverse[a]] == G.identity for a in range(n))
    assert all(sorted(T[a]) == list(range(n)) for a in range(n))


def test_symmetric_labels_and_parsing():
    S3 = symmetric(3)
    t = S3.element("(1,2)")
    c = S3.element("(1,2,3)")
    assert S3.element_order(t) == 2 and S3.element_order(c) == 3
    assert S3.generate(["(1,2)", "(1,2,3)"]).order == 6
    with pytest.raises(GroupError):
        S3.element("(1,5)")
    with pytest.raises(GroupError):
        build_group("frob(3)")
    with pytest.raises(GroupError):
        build_group("product(cyclic(2))")


def test_dihedral_and_cyclic_shapes():
    assert dihedral(4).order == 8 and not dihedral(4).is_abelian()
    assert cyclic(5).is_abelian()


def test_subgroup_bound():
    with pytest.raises(GroupSizeError):
        enumerate_subgroups(symmetric(5), max_order=48)


def _triples(G):
    subs = enumerate_subgroups(G)
    return [(J, K, H) for H in subs for J in subs for K in subs if J.issubset(H) and K.issubset(H)]


TRIPLES = [t for spec in ("symmetric(3)", "dihedral(4)", "cyclic(6)", "product(cyclic(2),cyclic(2))") for t in _triples(group(spec))]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(TRIPLES), st.sampled_from(["smallest", "largest"]))
def test_double_cosets_partition(triple, prefer):
    J, K, H = triple
    reps = double_coset_reps(J, K, H, prefer=prefer)
    seen: set[int] = set()
    for x, size in reps:
        dc = double_coset(J, x, K)
        assert len(dc) == size
        assert not (dc & seen)
        seen |= dc
    assert seen == set(H.elements)
    # counting identity |H:J| = Σ |K : J^x ∩ K|
    assert H.order // J.order == sum(K.order // intersect(upper_conjugate(J, x), K).order for x, _ in reps)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(TRIPLES))
def test_refined_transversal_is_right_transversal(triple):
    J, K, H = triple
    G = H.parent
    flat = [G.mul(x, b) for x, bs in refined_transversal(J, K, H) for b in bs]
    assert len(flat) == H.order // J.order
    assert sorted(G.mul(j, y) for y in flat for j in J.elements) == list(H.elements)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(TRIPLES))
def test_coset_reps(triple):
    J, _, H = triple
    G = H.parent
    r = right_coset_reps(J, H)
    l = left_coset_reps(J, H)
    assert r[0] == G.identity and l[0] == G.identity
    assert sorted(G.mul(j, y) for y in r for j in J.elements) == list(H.elements)
    assert sorted(G.mul(z, j) for z in l for j in J.elements) == list(H.elements)


def test_conjugation_conventions(S3):
    H = S3.generate(["(1,2)"])
    g = S3.element("(1,3)")
    gH = conjugate_subgroup(g, H)
    assert set(gH.elements) == {S3.conj(g, h) for h in H.elements}
    assert upper_conjugate(gH, g) == H
    assert subconjugacy_witness(H, gH) is not None
    with pytest.raises(ContainmentError):
        double_coset_reps(S3.generate(["(1,2,3)"]), H, H)


def test_class_representative_is_canonical(S3):
    subs = [S for S in enumerate_subgroups(S3) if S.order == 2]
    reps = {class_representative(S, S3.whole).elements for S in subs}
    assert len(reps) == 1
