"""Twisted group rings ``R_θ[H]`` and the homomorphisms between them.

A :class:`GRing` is a finite commutative ring ``R`` with a group action
``θ: G -> Aut(R)`` stored as a ``|G| x |R|`` table.  For each subgroup ``H``
the twisted group ring has elements ``Σ r_h h`` and multiplication
``(r g)(r' g') = r θ_g(r') gg'``.

Ring maps ``Τ(H, x, K): rh -> θ_{x^-1}(r) x^-1 h x`` (defined when
``x^-1 H x ⊆ K``) are built by :func:`tau_hom`; inclusions ``ρ`` and
conjugations ``γ^g`` are special cases.  Every map is checked on all pairs
of pure elements ``r h`` at construction, which suffices since those span.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .algebra import AlgebraHom, RightBasisOracle, StructureAlgebra
from .fields import FiniteField
from .groups import ContainmentError, FiniteGroup, Subgroup, left_coset_reps, right_coset_reps, upper_conjugate
from .rings import FiniteRing


class TwistedRingError(ValueError):
    pass


class NonInvertibleOrderError(TwistedRingError):
    """|G|·1 is not a unit and the instance is not a faithful Galois action on a field."""


class ActionError(TwistedRingError):
    pass


class RingMismatchError(TwistedRingError):
    pass


class TauConditionError(TwistedRingError):
    pass


class UnsupportedBaseError(TwistedRingError):
    """The operation needs a finite field base ring."""


class UnsupportedInstanceError(TwistedRingError):
    pass


def order_gate(ring: FiniteRing, group: FiniteGroup, theta: np.ndarray) -> str:
    """Reason the instance is admissible, or raise :class:`NonInvertibleOrderError`.

    Accepted when ``|G|·1`` is a unit of ``R``, or when ``R`` is a field on
    which ``G`` acts faithfully (then ``R_θ[G]`` is a matrix algebra over
    ``R^G`` and still semisimple even if the characteristic divides ``|G|``).
    """
    n = group.order
    if ring.is_unit(ring.multiple(n)):
        return "order-invertible"
    faithful = len({tuple(row) for row in theta.tolist()}) == n
    if ring.is_field() and faithful:
        return "faithful-galois"
    raise NonInvertibleOrderError(
        f"|G| = {n} is not invertible in {ring.label}; the construction needs |G|·1 to be a unit "
        "(or a faithful action on a field)"
    )


class GRing:
    def __init__(self, ring: FiniteRing, group: FiniteGroup, theta, label: str | None = None) -> None:
        th = np.asarray(theta, dtype=np.int64)
        if th.shape != (group.order, ring.size):
            raise ActionError(f"action table must have shape ({group.order}, {ring.size}), got {th.shape}")
        for g in group.elements():
            why = ring.is_automorphism(th[g])
            if why is not None:
                raise ActionError(f"θ({group.element_labels[g]}) is not a ring automorphism: {why}")
        if not np.array_equal(th[group.identity], np.arange(ring.size)):
            raise ActionError("θ(e) is not the identity")
        # θ(gh) = θ(g)∘θ(h): lhs[g,h,r] = θ_{gh}(r), rhs[g,h,r] = θ_g(θ_h(r))
        lhs = th[group.table]
        rhs = th[np.arange(group.order)[:, None, None], th[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            g, h, r = bad[0]
            raise ActionError(
                f"θ is not a homomorphism: θ(gh) ≠ θ(g)θ(h) at g={group.element_labels[g]}, "
                f"h={group.element_labels[h]}, r={ring.element_labels[r]}"
            )
        th.setflags(write=False)
        self.ring = ring
        self.group = group
        self.theta = th
        self.gate = order_gate(ring, group, th)
        self.label = label or f"{ring.label} ⋊ {group.label}"
        self._twisted: dict[tuple[int, ...], TwistedGroupRing] = {}
        self._algebras: dict[tuple[int, ...], TwistedAlgebra] = {}
        self._homs: dict[tuple, AlgebraHom] = {}

    def __repr__(self) -> str:
        return f"GRing({self.label})"

    @classmethod
    def trivial(cls, ring: FiniteRing, group: FiniteGroup) -> GRing:
        th = np.tile(np.arange(ring.size), (group.order, 1))
        return cls(ring, group, th, label=f"{ring.label}[{group.label}]")

    @classmethod
    def from_generators(cls, ring: FiniteRing, group: FiniteGroup, images: Mapping[int | str, Iterable[int]]) -> GRing:
        """Extend automorphism tables on generators to the whole group (must be consistent)."""
        gens = {group.element(g): np.asarray(list(t), dtype=np.int64) for g, t in images.items()}
        th: dict[int, np.ndarray] = {group.identity: np.arange(ring.size)}
        frontier = [group.identity]
        while frontier:
            nxt = []
            for g in frontier:
                for s, ts in gens.items():
                    sg = group.mul(s, g)
                    img = ts[th[g]]
                    if sg in th:
                        if not np.array_equal(th[sg], img):
                            raise ActionError(
                                f"generator images do not define a homomorphism (conflict at {group.element_labels[sg]})"
                            )
                    else:
                        th[sg] = img
                        nxt.append(sg)
            frontier = nxt
        if len(th) != group.order:
            raise ActionError("action generators do not generate the group")
        return cls(ring, group, np.array([th[g] for g in group.elements()]))

    @classmethod
    def frobenius(cls, field: FiniteField, group: FiniteGroup, power: int = 1, generator: int | str | None = None) -> GRing:
        """Cyclic ``group`` acting on ``field`` with the generator as ``x -> x^(p^power)``."""
        if generator is None:
            generator = getattr(group, "cyclic_generator", None)
        if generator is None:
            cands = [g for g in group.elements() if group.element_order(g) == group.order]
            if not cands:
                raise ActionError(f"{group.label} is not cyclic; a Frobenius action needs a generator")
            generator = cands[0]
        g = group.element(generator)
        gring = cls.from_generators(field, group, {g: field.frobenius(power)})
        gring.label = f"{field.label} ⋊ {group.label} (Frobenius^{power})"
        return gring

    # -- element-level helpers -------------------------------------------------

    def apply(self, g: int, r: int) -> int:
        return int(self.theta[g, r])

    def is_trivial_action(self) -> bool:
        return bool((self.theta == np.arange(self.ring.size)[None, :]).all())

    def twisted(self, H: Subgroup | None = None) -> TwistedGroupRing:
        H = H if H is not None else self.group.whole
        if H.parent is not self.group:
            raise RingMismatchError("subgroup belongs to a different group")
        if H.elements not in self._twisted:
            self._twisted[H.elements] = TwistedGroupRing(self, H)
        return self._twisted[H.elements]

    def algebra(self, H: Subgroup | None = None) -> TwistedAlgebra:
        """``R_θ[H]`` as a structure algebra over the prime field (cached)."""
        T = self.twisted(H)
        if T.subgroup.elements not in self._algebras:
            self._algebras[T.subgroup.elements] = as_structure_algebra(T)
        return self._algebras[T.subgroup.elements]

    def algebra_hom(self, H: Subgroup, x: int, K: Subgroup) -> AlgebraHom:
        """Linear map of ``Τ(H, x, K)`` between the structure algebras, with its right-basis oracle."""
        key = (H.elements, x, K.elements)
        if key not in self._homs:
            self._homs[key] = _tau_algebra_hom(self, H, x, K)
        return self._homs[key]


def galois_gring(p: int, k: int, modulus=None) -> GRing:
    """``GF(p^k)`` with ``Gal = C_k`` acting by Frobenius."""
    from .groups import cyclic

    return GRing.frobenius(FiniteField(p, k, modulus), cyclic(k))


class TwistedGroupRing:
    def __init__(self, base: GRing, subgroup: Subgroup) -> None:
        self.base = base
        self.subgroup = subgroup
        pos = np.full(base.group.order, -1, dtype=np.int64)
        pos[list(subgroup.elements)] = np.arange(subgroup.order)
        pos.setflags(write=False)
        self.positions = pos

    def __repr__(self) -> str:
        return f"TwistedGroupRing({self.base.ring.label}_θ[{self.subgroup.label()}])"

    @property
    def ring(self) -> FiniteRing:
        return self.base.ring

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    def element(self, terms: Mapping[int, int] | Iterable[tuple[int, int]]) -> TGRElement:
        return TGRElement.build(self, terms.items() if isinstance(terms, Mapping) else terms)

    def pure(self, r: int, h: int) -> TGRElement:
        return TGRElement.build(self, [(h, r)])

    def zero(self) -> TGRElement:
        return TGRElement(self, ())

    def one(self) -> TGRElement:
        return self.pure(self.ring.one, self.group.identity)

    def pure_elements(self) -> Iterable[TGRElement]:
        for h in self.subgroup.elements:
            for r in self.ring.elements():
                if r != self.ring.zero:
                    yield TGRElement(self, ((h, r),))

    @cached_property
    def pure_product_table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(ring[a,b,r1,r2], group[a,b])`` for ``(r1 h_a)(r2 h_b)`` with ``h`` in subgroup order."""
        hs = np.array(self.subgroup.elements)
        th = self.base.theta[hs]  # (n, R)
        ring = self.ring.mul_table[np.arange(self.ring.size)[None, None, :, None], th[:, None, None, :]]
        ring = np.broadcast_to(ring, (len(hs), len(hs), self.ring.size, self.ring.size))
        return ring, self.group.table[hs[:, None], hs[None, :]]


@dataclass(frozen=True, eq=False)
class TGRElement:
    """``Σ r_h h`` stored as sorted ``(h, r)`` pairs with zero coefficients dropped."""

    ring: TwistedGroupRing
    terms: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, T: TwistedGroupRing, terms: Iterable[tuple[int, int]]) -> TGRElement:
        R = T.ring
        acc: dict[int, int] = {}
        for h, r in terms:
            h, r = int(h), int(r)
            if T.positions[h] < 0:
                raise ContainmentError(f"{T.group.element_labels[h]} is not in {T.subgroup.label()}")
            acc[h] = R.add(acc.get(h, R.zero), r)
        return cls(T, tuple(sorted((h, r) for h, r in acc.items() if r != R.zero)))

    def _same(self, other: TGRElement) -> None:
        if not isinstance(other, TGRElement) or self.ring is not other.ring:
            raise RingMismatchError("elements belong to different twisted group rings")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TGRElement):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: TGRElement) -> TGRElement:
        self._same(other)
        return TGRElement.build(self.ring, self.terms + other.terms)

    def __neg__(self) -> TGRElement:
        R = self.ring.ring
        return TGRElement(self.ring, tuple((h, R.neg(r)) for h, r in self.terms))

    def __sub__(self, other: TGRElement) -> TGRElement:
        return self + (-other)

    def __mul__(self, other: TGRElement) -> TGRElement:
        return tgr_multiply(self, other)

    def coefficient(self, h: int) -> int:
        return dict(self.terms).get(h, self.ring.ring.zero)

    def is_pure(self) -> bool:
        return len(self.terms) <= 1

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        R, G = self.ring.ring, self.ring.group
        return " + ".join(f"({R.element_labels[r]})·{G.element_labels[h]}" for h, r in self.terms)


def tgr_multiply(a: TGRElement, b: TGRElement) -> TGRElement:
    a._same(b)
    T = a.ring
    R, G, th = T.ring, T.group, T.base.theta
    out = []
    for g1, r1 in a.terms:
        for g2, r2 in b.terms:
            out.append((G.mul(g1, g2), R.mul(r1, int(th[g1, r2]))))
    return TGRElement.build(T, out)


class TGRHom:
    """Additive extension of ``r h -> ring_maps[h](r) · group_map[h]``.

    ``ring_maps`` and ``group_map`` are indexed by position of ``h`` in the
    source subgroup.  Construction checks additivity, unitality and
    multiplicativity on every pair of pure elements.
    """

    def __init__(
        self,
        source: TwistedGroupRing,
        target: TwistedGroupRing,
        ring_maps: np.ndarray,
        group_map: np.ndarray,
        triple: tuple[int, int, int] | None = None,
        label: str = "f",
        check: bool = True,
    ) -> None:
        if source.base is not target.base:
            raise RingMismatchError("homomorphisms must stay inside one G-ring")
        self.source, self.target = source, target
        self.ring_maps = np.asarray(ring_maps, dtype=np.int64)
        self.group_map = np.asarray(group_map, dtype=np.int64)
        self.ring_maps.setflags(write=False)
        self.group_map.setflags(write=False)
        self.triple = triple
        self.label = label
        if check:
            self._check()

    def _check(self) -> None:
        S, T = self.source, self.target
        R, G, th = S.ring, S.group, S.base.theta
        alpha, phi = self.ring_maps, self.group_map
        n = S.subgroup.order
        if alpha.shape != (n, R.size) or phi.shape != (n,):
            raise TwistedRingError("hom data has the wrong shape")
        if (T.positions[phi] < 0).any():
            h = S.subgroup.elements[int(np.flatnonzero(T.positions[phi] < 0)[0])]
            raise ContainmentError(f"{self.label} sends {G.element_labels[h]} outside the target subgroup")
        e = int(S.positions[G.identity])
        if alpha[e, R.one] != R.one or phi[e] != G.identity:
            raise TwistedRingError(f"{self.label} is not unital")
        add = R.add_table
        bad = np.argwhere(alpha[:, add] != add[alpha[:, :, None], alpha[:, None, :]])
        if len(bad):
            a, r1, r2 = bad[0]
            raise TwistedRingError(f"{self.label} is not additive at h={G.element_labels[S.subgroup.elements[a]]}, r={r1},{r2}")
        ring_prod, grp_prod = S.pure_product_table
        pos_ab = S.positions[grp_prod]  # (n, n)
        if not np.array_equal(phi[pos_ab], G.table[phi[:, None], phi[None, :]]):
            raise TwistedRingError(f"{self.label} is not multiplicative on group parts")
        lhs = alpha[pos_ab[:, :, None, None], ring_prod]
        # rhs[a,b,r1,r2] = α_a(r1) · θ_{φ(h_a)}(α_b(r2))
        tw = th[phi[:, None, None], alpha[None, :, :]]  # [a, b, r2] = θ_{φ(a)}(α_b(r2))
        rhs = R.mul_table[alpha[:, None, :, None], tw[:, :, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, r1, r2 = bad[0]
            hs = S.subgroup.elements
            raise TwistedRingError(
                f"{self.label} is not multiplicative on pure pair "
                f"({R.element_labels[r1]}·{G.element_labels[hs[a]]}, {R.element_labels[r2]}·{G.element_labels[hs[b]]})"
            )

    def __call__(self, u: TGRElement) -> TGRElement:
        if u.ring is not self.source:
            raise RingMismatchError(f"{self.label} applied to an element of the wrong ring")
        pos = self.source.positions
        return TGRElement.build(
            self.target, [(int(self.group_map[pos[h]]), int(self.ring_maps[pos[h], r])) for h, r in u.terms]
        )

    def compose(self, first: TGRHom) -> TGRHom:
        """``self ∘ first``."""
        if first.target is not self.source:
            raise RingMismatchError("non-composable homomorphisms")
        mid = self.source.positions[first.group_map]
        ring_maps = self.ring_maps[mid[:, None], first.ring_maps]
        group_map = self.group_map[mid]
        triple = None
        if self.triple and first.triple:
            triple = (first.triple[0], self.source.group.mul(first.triple[1], self.triple[1]), self.triple[2])
        return TGRHom(first.source, self.target, ring_maps, group_map, triple, label=f"{self.label}∘{first.label}")

    def agrees_with(self, other: TGRHom) -> bool:
        """Equality on all pure elements."""
        return (
            self.source is other.source
            and self.target is other.target
            and np.array_equal(self.ring_maps, other.ring_maps)
            and np.array_equal(self.group_map, other.group_map)
        )


def tau_hom(R: GRing, H: Subgroup, x: int | str, K: Subgroup) -> TGRHom:
    """``Τ(H, x, K): r h -> θ_{x^-1}(r) x^-1 h x``; needs ``x^-1 H x ⊆ K``."""
    G = R.group
    x = G.element(x)
    xi = G.inv(x)
    images = [G.prod(xi, h, x) for h in H.elements]
    for h, img in zip(H.elements, images):
        if img not in K:
            raise TauConditionError(
                f"Τ(H, {G.element_labels[x]}, K) undefined: x⁻¹hx = {G.element_labels[img]} ∉ K for h = {G.element_labels[h]}"
            )
    ring_maps = np.tile(R.theta[xi], (H.order, 1))
    return TGRHom(
        R.twisted(H), R.twisted(K), ring_maps, np.array(images), triple=(H, x, K), label=f"Τ(H,{G.element_labels[x]},K)"
    )


def rho(R: GRing, H: Subgroup, K: Subgroup) -> TGRHom:
    """Inclusion ``R_θ[H] -> R_θ[K]`` (the case ``x = e``)."""
    f = tau_hom(R, H, R.group.identity, K)
    f.label = "ρ"
    return f


def gamma(R: GRing, g: int | str, H: Subgroup) -> TGRHom:
    """``γ^g: R_θ[H] -> R_θ[gHg^-1]``, ``r h -> θ_g(r) g h g^-1``."""
    from .groups import conjugate_subgroup

    G = R.group
    g = G.element(g)
    f = tau_hom(R, H, G.inv(g), conjugate_subgroup(g, H))
    f.label = f"γ^{G.element_labels[g]}"
    return f


class ShiftMap:
    """``sh_y: r k -> r k y`` on ``R_θ[K]``; left-linear, not multiplicative."""

    def __init__(self, T: TwistedGroupRing, y: int) -> None:
        if y not in T.subgroup:
            raise ContainmentError(f"shift element {T.group.element_labels[y]} is not in {T.subgroup.label()}")
        self.ring, self.y = T, y

    def __call__(self, u: TGRElement) -> TGRElement:
        if u.ring is not self.ring:
            raise RingMismatchError("shift applied to an element of the wrong ring")
        G = self.ring.group
        return TGRElement.build(self.ring, [(G.mul(k, self.y), r) for k, r in u.terms])

    def then(self, other: ShiftMap) -> ShiftMap:
        """``other ∘ self`` = ``sh_{y y'}``."""
        return ShiftMap(self.ring, self.ring.group.mul(self.y, other.y))


def shift_map(T: TwistedGroupRing, y: int) -> ShiftMap:
    return ShiftMap(T, y)


@dataclass(frozen=True)
class LeftBasis:
    """``R_θ[K] = ⊕_i R_θ[H]·(1 y_i)`` for right coset reps ``y_i``."""

    small: TwistedGroupRing
    big: TwistedGroupRing
    reps: tuple[int, ...]

    def forward(self, coeffs: list[TGRElement]) -> TGRElement:
        if len(coeffs) != len(self.reps):
            raise ValueError(f"expected {len(self.reps)} coefficients")
        G = self.big.group
        terms = []
        for a, y in zip(coeffs, self.reps):
            if a.ring is not self.small:
                raise RingMismatchError("coefficient not in the smaller twisted group ring")
            terms.extend((G.mul(h, y), r) for h, r in a.terms)
        return TGRElement.build(self.big, terms)

    def express(self, u: TGRElement) -> list[TGRElement]:
        if u.ring is not self.big:
            raise RingMismatchError("element not in the larger twisted group ring")
        G = self.big.group
        slots: list[list[tuple[int, int]]] = [[] for _ in self.reps]
        for k, r in u.terms:
            for i, y in enumerate(self.reps):
                h = G.mul(k, G.inv(y))
                if h in self.small.subgroup:
                    slots[i].append((h, r))
                    break
        return [TGRElement.build(self.small, s) for s in slots]


def left_basis_decompose(R: GRing, H: Subgroup, K: Subgroup) -> LeftBasis:
    return LeftBasis(R.twisted(H), R.twisted(K), tuple(right_coset_reps(H, K)))


@dataclass(frozen=True)
class RightBasis:
    """``R_θ[K] = ⊕_j (1 z_j)·R_θ[H]`` for left coset reps ``z_j``."""

    small: TwistedGroupRing
    big: TwistedGroupRing
    reps: tuple[int, ...]

    def express(self, u: TGRElement) -> list[TGRElement]:
        if u.ring is not self.big:
            raise RingMismatchError("element not in the larger twisted group ring")
        G, th = self.big.group, self.big.base.theta
        slots: list[list[tuple[int, int]]] = [[] for _ in self.reps]
        for k, r in u.terms:
            for j, z in enumerate(self.reps):
                zi = G.inv(z)
                h = G.mul(zi, k)
                if h in self.small.subgroup:
                    slots[j].append((h, int(th[zi, r])))
                    break
        return [TGRElement.build(self.small, s) for s in slots]

    def assemble(self, coeffs: list[TGRElement]) -> TGRElement:
        total = self.big.zero()
        for z, a in zip(self.reps, coeffs):
            lifted = TGRElement.build(self.big, a.terms)
            total = total + self.big.pure(self.big.ring.one, z) * lifted
        return total


def right_basis(R: GRing, H: Subgroup, K: Subgroup) -> RightBasis:
    return RightBasis(R.twisted(H), R.twisted(K), tuple(left_coset_reps(H, K)))


def right_basis_express(R: GRing, H: Subgroup, K: Subgroup, u: TGRElement) -> list[TGRElement]:
    return right_basis(R, H, K).express(u)


# -- bridge to structure algebras over the prime field --------------------------


class TwistedAlgebra:
    """``R_θ[H]`` over ``GF(p)``, basis ``a^i h`` indexed by ``pos(h)·k + i``."""

    def __init__(self, T: TwistedGroupRing, algebra: StructureAlgebra) -> None:
        self.tgr = T
        self.algebra = algebra
        self.field: FiniteField = T.ring  # type: ignore[assignment]
        self.k = self.field.k

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def to_vector(self, u: TGRElement) -> np.ndarray:
        if u.ring is not self.tgr:
            raise RingMismatchError("element of a different twisted group ring")
        v = np.zeros(self.dim, dtype=np.int64)
        for h, r in u.terms:
            a = self.tgr.positions[h]
            v[a * self.k : (a + 1) * self.k] = self.field.to_vector(r)
        return v

    def from_vector(self, v) -> TGRElement:
        v = np.asarray(v, dtype=np.int64) % self.field.p
        terms = []
        for a, h in enumerate(self.tgr.subgroup.elements):
            terms.append((h, self.field.from_vector(v[a * self.k : (a + 1) * self.k])))
        return TGRElement.build(self.tgr, terms)


def as_structure_algebra(T: TwistedGroupRing) -> TwistedAlgebra:
    F = T.ring
    if not isinstance(F, FiniteField):
        raise UnsupportedBaseError(f"the algebra bridge needs a finite field base ring, got {F.label}")
    p, k = F.p, F.k
    hs = np.array(T.subgroup.elements)
    n = len(hs)
    basis = p ** np.arange(k)  # ring elements a^i
    th = T.base.theta
    # r[a,i,b,j] = a^i · θ_{h_a}(a^j)
    tw = th[hs][:, basis]  # (n, k)
    r = F.mul_table[basis[None, :, None, None], tw[:, None, None, :]]  # (n,k,1,k)
    r = np.broadcast_to(r, (n, k, n, k))
    digits = F._digits[r]  # (n,k,n,k,k)
    target = T.positions[T.group.table[hs[:, None], hs[None, :]]]  # (n, n)
    c = np.zeros((n, k, n, k, n, k), dtype=np.int64)
    a_idx, b_idx = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    c[a_idx, :, b_idx, :, target, :] = digits.transpose(0, 2, 1, 3, 4)
    d = n * k
    labels = [f"{F.element_labels[int(basis[i])]}·{T.group.element_labels[h]}" for h in hs for i in range(k)]
    unit = np.zeros(d, dtype=np.int64)
    unit[T.positions[T.group.identity] * k] = 1
    return TwistedAlgebra(T, StructureAlgebra(p, c.reshape(d, d, d), unit, labels=labels))


def hom_matrix(R: GRing, f: TGRHom) -> np.ndarray:
    """Matrix (target dim x source dim) of ``f`` on the prime-field structure algebras."""
    A, B = R.algebra(f.source.subgroup), R.algebra(f.target.subgroup)
    F = A.field
    cols = []
    for a, h in enumerate(f.source.subgroup.elements):
        for i in range(A.k):
            img = f(f.source.pure(F.p**i, h))
            cols.append(B.to_vector(img))
    return np.array(cols, dtype=np.int64).T


def _tau_algebra_hom(R: GRing, H: Subgroup, x: int, K: Subgroup) -> AlgebraHom:
    f = tau_hom(R, H, x, K)
    A, B = R.algebra(H), R.algebra(K)
    M = hom_matrix(R, f)
    G = R.group
    image = upper_conjugate(H, x)  # x^-1 H x
    rb = right_basis(R, image, K)
    back = tau_hom(R, image, G.inv(x), H)  # inverse of γ-part
    p = A.field.p
    E = np.zeros((B.dim, len(rb.reps), A.dim), dtype=np.int64)
    for i in range(B.dim):
        for j, c in enumerate(rb.express(B.from_vector(B.algebra.basis_vector(i)))):
            E[i, j] = A.to_vector(back(c))
    E.setflags(write=False)
    reps = np.array([B.to_vector(B.tgr.pure(B.field.one, z)) for z in rb.reps])
    labels = [G.element_labels[z] for z in rb.reps]
    oracle = RightBasisOracle(reps, lambda b: np.einsum("i,ijk->jk", np.asarray(b, dtype=np.int64), E) % p, labels)
    return AlgebraHom(A.algebra, B.algebra, M, right_basis=oracle, label=f.label)


# -- fixed subrings and the Auslander map -----------------------------------------


@dataclass(frozen=True)
class FixedSubring:
    gring: GRing
    subgroup: Subgroup
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def inclusion(self) -> dict[int, int]:
        return {r: r for r in self.elements}


def fixed_subring(R: GRing, H: Subgroup) -> FixedSubring:
    rows = R.theta[list(H.elements)]
    fixed = np.flatnonzero((rows == np.arange(R.ring.size)[None, :]).all(axis=0))
    elems = tuple(int(r) for r in fixed)
    s = set(elems)
    A, M = R.ring.add_table, R.ring.mul_table
    for a in elems:
        for b in elems:
            if int(A[a, b]) not in s or int(M[a, b]) not in s:
                raise TwistedRingError("fixed points are not closed under ring operations")  # pragma: no cover
    return FixedSubring(R, H, elems)


@dataclass(frozen=True, eq=False)
class AuslanderResult:
    subgroup: Subgroup
    fixed_dim: int  # dim of R^H over GF(p)
    rank_over_fixed: int  # m with R ≅ (R^H)^m
    fixed_basis: tuple[int, ...]  # GF(p)-basis of R^H (ring elements)
    module_basis: tuple[int, ...]  # R^H-basis t_1..t_m of R
    images: np.ndarray  # (dim A, k, k) GF(p)-matrices of basis images
    image_rank: int
    domain_dim: int
    codomain_dim: int
    multiplicative: bool
    field: FiniteField

    @property
    def is_isomorphism(self) -> bool:
        return self.multiplicative and self.image_rank == self.domain_dim == self.codomain_dim

    @property
    def verdict(self) -> str:
        return "isomorphism" if self.is_isomorphism else "not an isomorphism"

    def matrix_over_fixed(self, u) -> list[list[int]]:
        """Matrix over ``R^H`` (ring element entries) of the image of ``u`` in the basis ``t_j``."""
        F, p = self.field, self.field.p
        phi = np.einsum("a,akl->kl", np.asarray(u, dtype=np.int64), self.images) % p
        # GF(p)-basis of R: c_l t_i, column index i*f + l
        cols = [F.to_vector(F.mul(c, t)) for t in self.module_basis for c in self.fixed_basis]
        P = np.array(cols, dtype=np.int64).T
        f, m = self.fixed_dim, self.rank_over_fixed
        out = [[F.zero] * m for _ in range(m)]
        for j, t in enumerate(self.module_basis):
            coords = linalg.solve(P, phi @ F.to_vector(t) % p, p)
            for i in range(m):
                entry = F.zero
                for l, c in enumerate(self.fixed_basis):
                    entry = F.add(entry, F.mul(int(coords[i * f + l]), c))
                out[i][j] = entry
        return out


def auslander_map(R: GRing, H: Subgroup) -> AuslanderResult:
    """``R_θ[H] -> End_{R^H}(R)``, ``r g -> (t -> r θ_g(t))``, with an isomorphism verdict."""
    F = R.ring
    if not isinstance(F, FiniteField):
        raise UnsupportedInstanceError(f"the Auslander map is computed for finite field bases only, got {F.label}")
    p, k = F.p, F.k
    A = R.algebra(H)
    eye = np.eye(k, dtype=np.int64)
    # R^H as a GF(p)-subspace: common kernel of θ_h - 1
    stack = np.vstack([(F.automorphism_matrix(R.theta[h]) - eye) % p for h in H.elements])
    Fix = linalg.kernel(stack, p)
    fixed_basis = tuple(F.from_vector(v) for v in Fix)
    f = len(fixed_basis)
    # greedy R^H-basis of R
    module_basis: list[int] = []
    span = np.zeros((0, k), dtype=np.int64)
    for i in range(k):
        t = p**i
        if linalg.rank(np.vstack([span, F.to_vector(t)]), p) == span.shape[0]:
            continue
        module_basis.append(t)
        span = linalg.row_basis(np.vstack([span] + [F.to_vector(F.mul(c, t)) for c in fixed_basis]), p)
    m = len(module_basis)
    if m * f != k or span.shape[0] != k:
        raise UnsupportedInstanceError(f"{F.label} is not free over its {H.label()}-fixed subring")
    images = np.zeros((A.dim, k, k), dtype=np.int64)
    for a, h in enumerate(H.elements):
        Th = F.automorphism_matrix(R.theta[h])
        for i in range(k):
            images[a * k + i] = F.multiplication_matrix(p**i) @ Th % p
    image_rank = linalg.rank(images.reshape(A.dim, k * k), p)
    # End_{R^H}(R) = centralizer of multiplication by R^H inside M_k(GF(p))
    rows = []
    for c in fixed_basis:
        Mc = F.multiplication_matrix(c)
        # vec(Mc X - X Mc) = (I ⊗ Mc - Mc^T ⊗ I) vec(X) with row-major vec
        rows.append((np.kron(Mc, eye) - np.kron(eye, Mc.T)) % p)
    codomain_dim = k * k - linalg.rank(np.vstack(rows), p)
    consts = A.algebra.constants
    lhs = np.einsum("ijc,ckl->ijkl", consts, images) % p
    rhs = np.einsum("ikm,jml->ijkl", images, images) % p
    multiplicative = bool(np.array_equal(lhs, rhs))
    return AuslanderResult(
        H, f, m, fixed_basis, tuple(module_basis), images, image_rank, A.dim, codomain_dim, multiplicative, F
    )
