from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistmackey.fields import FiniteField
from twistmackey.groups import conjugate_subgroup, cyclic, enumerate_subgroups, upper_conjugate
from twistmackey.rings import IntegersMod
from twistmackey.twisted import (
    ActionError,
    GRing,
    NonInvertibleOrderError,
    TauConditionError,
    TGRElement,
    UnsupportedBaseError,
    UnsupportedInstanceError,
    as_structure_algebra,
    auslander_map,
    fixed_subring,
    gamma,
    left_basis_decompose,
    rho,
    right_basis,
    shift_map,
    tau_hom,
)

from conftest import galois, trivial_gring

CONFIGS = [("gf7/S3", lambda: trivial_gring(7, 1, "symmetric(3)")), ("gf64/C6", lambda: galois(2, 6)), ("gf9/C2", lambda: galois(3, 2))]


def naive_product(T, u, v):
    """Σ r θ_g(r') gg' computed term by term from the definition."""
    R, G, th = T.ring, T.group, T.base.theta
    acc: dict[int, int] = {}
    for g, r in u.terms:
        for h, s in v.terms:
            gh = G.mul(g, h)
            acc[gh] = R.add(acc.get(gh, R.zero), R.mul(r, int(th[g, s])))
    return TGRElement.build(T, acc.items())


def elements(R: GRing, H):
    T = R.twisted(H)
    hs = list(H.elements)
    return st.lists(st.tuples(st.sampled_from(hs), st.integers(0, R.ring.size - 1)), max_size=4).map(lambda t: TGRElement.build(T, t))


@pytest.mark.parametrize("name,make", CONFIGS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_product_matches_definition_and_is_associative(name, make, data):
    R = make()
    T = R.twisted()
    es = elements(R, R.group.whole)
    u, v, w = data.draw(es), data.draw(es), data.draw(es)
    assert u * v == naive_product(T, u, v)
    assert (u * v) * w == u * (v * w)
    assert u * (v + w) == u * v + u * w
    assert T.one() * u == u == u * T.one()


def test_worked_multiplication_in_gf9():
    F = FiniteField(3, 2, modulus=[2, 2, 1])
    R = GRing.frobenius(F, cyclic(2))
    T = R.twisted()
    a, s = 3, 1
    # (aσ)(aσ) = a·a³·e = a⁴ = 2
    assert T.pure(a, s) * T.pure(a, s) == T.pure(2, 0)


def test_gate_and_action_errors():
    with pytest.raises(NonInvertibleOrderError):
        GRing.trivial(FiniteField(2), cyclic(2))
    with pytest.raises(NonInvertibleOrderError):
        GRing.trivial(IntegersMod(6), cyclic(3))
    assert galois(2, 6).gate == "faithful-galois"
    assert trivial_gring(7, 1, "symmetric(3)").gate == "order-invertible"
    F = FiniteField(3, 2)
    with pytest.raises(ActionError):
        GRing.from_generators(F, cyclic(3), {1: F.frobenius(1)})  # Frobenius has order 2, not 3
    with pytest.raises(UnsupportedBaseError):
        as_structure_algebra(GRing.trivial(IntegersMod(5), cyclic(2)).twisted())


def _pairs(G):
    subs = enumerate_subgroups(G)
    return [(H, K) for H in subs for K in subs if H.issubset(K)]


@pytest.mark.parametrize("name,make", CONFIGS)
def test_tau_composition_and_gamma(name, make):
    R = make()
    G = R.group
    subs = enumerate_subgroups(G)
    for H in subs:
        for x in G.elements():
            xHx = upper_conjugate(H, x)  # x^-1 H x
            for K in subs:
                if not xHx.issubset(K):
                    continue
                f = tau_hom(R, H, x, K)
                for y in (G.identity, G.inv(x)):
                    yKy = upper_conjugate(K, y)
                    g = tau_hom(R, K, y, yKy)
                    assert g.compose(f).agrees_with(tau_hom(R, H, G.mul(x, y), yKy))
    # γ^g γ^h = γ^{gh}
    H = subs[len(subs) // 2]
    for g in G.elements():
        for h in G.elements():
            hH = conjugate_subgroup(h, H)
            assert gamma(R, g, hH).compose(gamma(R, h, H)).agrees_with(gamma(R, G.mul(g, h), H))
    with pytest.raises(TauConditionError):
        tau_hom(R, G.whole, G.identity, G.trivial)


@pytest.mark.parametrize("name,make", CONFIGS)
def test_gamma_by_member_is_inner(name, make):
    R = make()
    G = R.group
    T = R.twisted()
    one = R.ring.one
    for h in G.elements():
        g = gamma(R, h, G.whole)
        for u in list(T.pure_elements())[:60]:
            assert g(u) == T.pure(one, h) * u * T.pure(one, G.inv(h))


@pytest.mark.parametrize("name,make", CONFIGS[:2])
def test_left_and_right_basis_roundtrip(name, make):
    R = make()
    for H, K in _pairs(R.group):
        lb = left_basis_decompose(R, H, K)
        rb = right_basis(R, H, K)
        assert len(lb.reps) == len(rb.reps) == K.order // H.order
        inc = rho(R, H, K)
        for u in R.twisted(K).pure_elements():
            coeffs = lb.express(u)
            assert lb.forward(coeffs) == u
            # the left decomposition really is Σ a_i·(1 y_i) computed in R_θ[K]
            T = lb.big
            assert sum((inc(a) * T.pure(T.ring.one, y) for a, y in zip(coeffs, lb.reps)), T.zero()) == u
            assert rb.assemble(rb.express(u)) == u


def test_shift_maps():
    R = trivial_gring(7, 1, "symmetric(3)")
    T = R.twisted()
    G = R.group
    y, z = G.element("(1,2)"), G.element("(1,2,3)")
    sy, sz = shift_map(T, y), shift_map(T, z)
    u = TGRElement.build(T, [(0, 3), (z, 2)])
    assert sy.then(sz)(u) == sz(sy(u))
    r = T.pure(5, y)
    assert sy(r * u) == r * sy(u)  # left-linear


@pytest.mark.parametrize("p,k", [(3, 2), (2, 3), (5, 2), (2, 6)])
def test_auslander_isomorphism(p, k):
    R = galois(p, k)
    G = R.group
    F = R.ring
    a = auslander_map(R, G.whole)
    assert a.verdict == "isomorphism"
    assert a.image_rank == a.domain_dim == k * k
    assert a.rank_over_fixed == k and a.fixed_dim == 1
    # image of a^i h is t -> a^i θ_h(t)
    for idx, h in enumerate(G.elements()):
        for i in range(k):
            M = a.images[idx * k + i]
            for t in range(0, F.size, max(1, F.size // 7)):
                want = F.mul(p**i, int(R.theta[h, t]))
                assert F.from_vector(M @ F.to_vector(t) % p) == want
    assert len(R.algebra().algebra.blocks) == 1


def test_auslander_on_subgroups_and_unsupported():
    R = galois(2, 6)
    for H in enumerate_subgroups(R.group):
        a = auslander_map(R, H)
        assert a.is_isomorphism
        assert len(fixed_subring(R, H).elements) == 2 ** (6 // H.order)
    with pytest.raises(UnsupportedInstanceError):
        auslander_map(GRing.trivial(IntegersMod(5), cyclic(2)), cyclic(2).whole)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_left_basis_express_after_forward(data):
    R = trivial_gring(7, 1, "symmetric(3)") if data.draw(st.booleans()) else galois(2, 6)
    subs = enumerate_subgroups(R.group)
    H, K = data.draw(st.sampled_from([(H, K) for H in subs for K in subs if H.issubset(K)]))
    lb = left_basis_decompose(R, H, K)
    coeffs = [data.draw(elements(R, H)) for _ in lb.reps]
    assert lb.express(lb.forward(coeffs)) == coeffs
