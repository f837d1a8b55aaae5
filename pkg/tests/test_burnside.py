from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.burnside import (
    BurnsideElement,
    EquivarianceError,
    GMap,
    burnside_hom_basis,
    burnside_product,
    burnside_ring_basis,
    compose_spans,
    cosets,
    disjoint_union,
    gset_element,
    identity_span,
    isomorphic,
    marks_vector,
    orbit_decompose,
    point,
    product,
    pullback,
    regular,
    subgroup_class_reps,
    terminal_map,
    transitive_span_basis,
)
from twistmackey.groups import (
    conjugate_subgroup,
    cyclic,
    double_coset_reps,
    intersect,
    subgroup_classes,
    symmetric,
)

from conftest import group

GROUPS = ["cyclic(2)", "cyclic(6)", "symmetric(3)", "dihedral(4)"]


def _cosets_of(G):
    return [cosets(S) for S in subgroup_class_reps(G.whole)]


def test_table_of_marks_s3():
    G = symmetric(3)
    marks = np.array([marks_vector(X) for X in _cosets_of(G)])
    assert marks.tolist() == [[6, 0, 0, 0], [3, 1, 0, 0], [2, 0, 2, 0], [1, 1, 1, 1]]


@pytest.mark.parametrize("spec", GROUPS)
def test_marks_are_multiplicative_and_decide_isomorphism(spec):
    G = group(spec)
    sets = _cosets_of(G)
    for X in sets:
        for Y in sets:
            P = product(X, Y)
            assert np.array_equal(marks_vector(P), marks_vector(X) * marks_vector(Y))
            # rebuild P from its orbit decomposition and compare
            rebuilt = None
            for stab, _ in orbit_decompose(P):
                C = cosets(stab)
                rebuilt = C if rebuilt is None else disjoint_union(rebuilt, C)
            assert isomorphic(P, rebuilt)
            assert marks_vector(disjoint_union(X, Y)).tolist() == (marks_vector(X) + marks_vector(Y)).tolist()


def test_regular_and_point():
    G = symmetric(3)
    assert marks_vector(regular(G)).tolist() == [6, 0, 0, 0]
    assert marks_vector(point(G)).tolist() == [1, 1, 1, 1]


def test_equivariance_error_names_witness():
    G = cyclic(2)
    X = regular(G)
    with pytest.raises(EquivarianceError) as err:
        GMap(X, X, [0, 0])
    assert "g" in str(err.value) or "x" in str(err.value)


@pytest.mark.parametrize("spec", GROUPS)
def test_hom_ranks(spec):
    G = group(spec)
    reps = subgroup_class_reps(G.whole)
    for H in reps:
        for K in reps:
            X, Y = cosets(H), cosets(K)
            dc = double_coset_reps(H, K, G.whole)
            assert len(burnside_hom_basis(X, Y)) == len(dc)
            # full transitive-span basis: Σ over double cosets of #classes of subgroups of H ∩ xKx⁻¹
            expected = sum(len(subgroup_classes(G, within=intersect(H, conjugate_subgroup(x, K)))) for x, _ in dc)
            assert len(transitive_span_basis(X, Y)) == expected


def test_burnside_ring_c2():
    G = cyclic(2)
    pt, basis = burnside_ring_basis(G)
    free = BurnsideElement.of(basis[0])  # [C2/e]
    assert basis[0].middle[0][0] == (0,)
    sq = burnside_product(free, free)
    assert sq == 2 * free
    # the same via composition of spans pt <- C2/e -> pt
    assert free.compose(free) == 2 * free
    one = BurnsideElement.of(basis[1])
    assert burnside_product(one, free) == free


def test_burnside_ring_is_commutative_s3():
    G = symmetric(3)
    pt, basis = burnside_ring_basis(G)
    els = [BurnsideElement.of(b) for b in basis]
    for a in els:
        for b in els:
            assert burnside_product(a, b) == burnside_product(b, a)
            assert a.compose(b) == burnside_product(a, b)


def test_pullback_size():
    G = symmetric(3)
    X, Y = cosets(G.generate(["(1,2)"])), cosets(G.generate(["(1,2,3)"]))
    P, p1, p2 = pullback(terminal_map(X), terminal_map(Y))
    assert P.size == X.size * Y.size


SPAN_SETS = [(spec, a, b, c) for spec in ("symmetric(3)", "cyclic(6)") for a in range(4) for b in range(4) for c in range(4)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPAN_SETS), st.data())
def test_span_composition_associative_and_unital(case, data):
    spec, a, b, c = case
    G = group(spec)
    reps = subgroup_class_reps(G.whole)
    S, T, U, V = (cosets(reps[i % len(reps)]) for i in (a, b, c, a + b))
    s = data.draw(st.sampled_from(transitive_span_basis(S, T)))
    t = data.draw(st.sampled_from(transitive_span_basis(T, U)))
    u = data.draw(st.sampled_from(transitive_span_basis(U, V)))
    left = BurnsideElement.of(u).compose(BurnsideElement.of(t).compose(BurnsideElement.of(s)))
    right = BurnsideElement.of(u).compose(BurnsideElement.of(t)).compose(BurnsideElement.of(s))
    assert left == right
    assert compose_spans(identity_span(S), s) == s
    assert compose_spans(s, identity_span(T)) == s


def test_gset_element_of_point_is_unit():
    G = symmetric(3)
    pt, basis = burnside_ring_basis(G)
    one = gset_element(pt, point(G))
    x = BurnsideElement.of(basis[1])
    assert burnside_product(one, x) == x
