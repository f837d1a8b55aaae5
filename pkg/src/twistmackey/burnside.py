"""Finite G-sets, spans and the Burnside category.

A :class:`GSet` is acted on by a subgroup ``over`` of an ambient group;
``action[x, g] = g·x`` (columns for ``g`` outside ``over`` are ``-1``).
Restriction to a smaller subgroup only changes ``over``.

Isomorphism of G-sets is decided by marks.  A span ``S <- U -> T`` is stored
up to isomorphism as one triple ``(stabilizer, image in S, image in T)`` per
orbit of ``U``, minimised over the orbit; the sorted tuple of these triples is
a complete invariant.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .groups import FiniteGroup, Subgroup, class_representative, left_coset_reps, subgroup_classes


class GSetError(ValueError):
    pass


class EquivarianceError(GSetError):
    pass


class GSet:
    def __init__(self, group: FiniteGroup, action, over: Subgroup | None = None, label: str = "X", check: bool = True) -> None:
        over = over or group.whole
        act = np.asarray(action, dtype=np.int64).reshape(-1, group.order)
        act.setflags(write=False)
        self.group, self.over, self.action, self.label = group, over, act, label
        self.size = act.shape[0]
        if check:
            self._check()

    def _check(self) -> None:
        G, hs = self.group, list(self.over.elements)
        a = self.action
        if self.size == 0:
            return
        sub = a[:, hs]
        if (sub < 0).any() or (sub >= self.size).any():
            raise GSetError(f"{self.label}: action values out of range")
        if not np.array_equal(a[:, G.identity], np.arange(self.size)):
            raise GSetError(f"{self.label}: the identity does not act trivially")
        for g in hs:
            for h in hs:
                # (gh)·x = g·(h·x)
                if not np.array_equal(a[:, G.mul(g, h)], a[a[:, h], g]):
                    raise GSetError(f"{self.label}: action is not compatible with the group law at ({g},{h})")

    def __repr__(self) -> str:
        return f"GSet({self.label}, size={self.size}, over={self.over.label()})"

    def act(self, g: int, x: int) -> int:
        return int(self.action[x, g])

    def restrict(self, H: Subgroup) -> GSet:
        if not H.issubset(self.over):
            raise GSetError("restriction to a subgroup not contained in the acting group")
        return GSet(self.group, self.action, H, label=f"Res({self.label})", check=False)

    @cached_property
    def orbits(self) -> list[tuple[Subgroup, int, tuple[int, ...]]]:
        return _orbits(self)


def point(G: FiniteGroup, over: Subgroup | None = None) -> GSet:
    return GSet(G, np.zeros((1, G.order), dtype=np.int64), over, label="pt", check=False)


def empty(G: FiniteGroup, over: Subgroup | None = None) -> GSet:
    return GSet(G, np.zeros((0, G.order), dtype=np.int64), over, label="∅", check=False)


def cosets(M: Subgroup, over: Subgroup | None = None) -> GSet:
    """``K/M`` (left cosets) for ``M ⊆ K = over``; point ``i`` is ``z_i M``."""
    G = M.parent
    K = over or G.whole
    reps = left_coset_reps(M, K)
    index = {}
    for i, z in enumerate(reps):
        for m in M.elements:
            index[G.mul(z, m)] = i
    act = np.full((len(reps), G.order), -1, dtype=np.int64)
    for i, z in enumerate(reps):
        for g in K.elements:
            act[i, g] = index[G.mul(g, z)]
    return GSet(G, act, K, label=f"{K.order}/{M.order}", check=False)


def regular(G: FiniteGroup, over: Subgroup | None = None) -> GSet:
    return cosets(G.trivial, over)


def disjoint_union(X: GSet, Y: GSet) -> GSet:
    _same_over(X, Y)
    act = np.vstack([X.action, np.where(Y.action >= 0, Y.action + X.size, -1)])
    return GSet(X.group, act, X.over, label=f"{X.label}⊔{Y.label}", check=False)


def product(X: GSet, Y: GSet) -> GSet:
    """Diagonal action on ``X × Y``; the point ``(x, y)`` has index ``x·|Y| + y``."""
    _same_over(X, Y)
    act = np.where((X.action[:, None, :] >= 0), X.action[:, None, :] * Y.size + Y.action[None, :, :], -1)
    return GSet(X.group, act.reshape(X.size * Y.size, -1), X.over, label=f"{X.label}×{Y.label}", check=False)


def _same_over(X: GSet, Y: GSet) -> None:
    if X.group is not Y.group or X.over != Y.over:
        raise GSetError("G-sets over different groups")


def _orbits(X: GSet) -> list[tuple[Subgroup, int, tuple[int, ...]]]:
    G, hs = X.group, list(X.over.elements)
    seen = np.zeros(X.size, dtype=bool)
    out = []
    for x in range(X.size):
        if seen[x]:
            continue
        orb = sorted(set(int(v) for v in X.action[x, hs]))
        seen[orb] = True
        stab = G.subgroup(h for h in hs if X.action[x, h] == x)
        out.append((stab, x, tuple(orb)))
    return out


def orbit_decompose(X: GSet) -> list[tuple[Subgroup, int]]:
    """``(stabilizer, representative)`` per orbit, representatives in increasing order."""
    return [(s, x) for s, x, _ in X.orbits]


def subgroup_class_reps(over: Subgroup) -> list[Subgroup]:
    return [cls[0] for cls in subgroup_classes(over.parent, within=over)]


def marks_vector(X: GSet) -> np.ndarray:
    """``#X^S`` for ``S`` running over class representatives of subgroups of ``X.over``."""
    out = []
    for S in subgroup_class_reps(X.over):
        cols = list(S.elements)
        out.append(int((X.action[:, cols] == np.arange(X.size)[:, None]).all(axis=1).sum()) if X.size else 0)
    return np.array(out, dtype=np.int64)


def isomorphic(X: GSet, Y: GSet) -> bool:
    _same_over(X, Y)
    return X.size == Y.size and np.array_equal(marks_vector(X), marks_vector(Y))


class GMap:
    def __init__(self, source: GSet, target: GSet, table, check: bool = True) -> None:
        _same_over(source, target)
        self.source, self.target = source, target
        self.table = np.asarray(table, dtype=np.int64).reshape(source.size)
        if check:
            self._check()

    def _check(self) -> None:
        X, Y, f = self.source, self.target, self.table
        if X.size and ((f < 0).any() or (f >= Y.size).any()):
            raise GSetError("map values out of range")
        for g in X.over.elements:
            bad = np.flatnonzero(f[X.action[:, g]] != Y.action[f, g]) if X.size else []
            if len(bad):
                x = int(bad[0])
                raise EquivarianceError(
                    f"map is not equivariant: f(g·x) ≠ g·f(x) for g={X.group.element_labels[g]}, x={x}"
                )

    def __call__(self, x: int) -> int:
        return int(self.table[x])


def identity_map(X: GSet) -> GMap:
    return GMap(X, X, np.arange(X.size), check=False)


def terminal_map(X: GSet) -> GMap:
    return GMap(X, point(X.group, X.over), np.zeros(X.size, dtype=np.int64), check=False)


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """``X ×_Z Y`` with its two projections."""
    if f.target is not g.target and not (f.target.size == g.target.size and np.array_equal(f.target.action, g.target.action)):
        raise GSetError("pullback of maps with different codomains")
    X, Y = f.source, g.source
    pairs = [(x, y) for x in range(X.size) for y in range(Y.size) if f.table[x] == g.table[y]]
    index = {pq: i for i, pq in enumerate(pairs)}
    act = np.full((len(pairs), X.group.order), -1, dtype=np.int64)
    for i, (x, y) in enumerate(pairs):
        for h in X.over.elements:
            act[i, h] = index[(int(X.action[x, h]), int(Y.action[y, h]))]
    P = GSet(X.group, act, X.over, label=f"{X.label}×_Z{Y.label}", check=False)
    p1 = GMap(P, X, [x for x, _ in pairs], check=False)
    p2 = GMap(P, Y, [y for _, y in pairs], check=False)
    return P, p1, p2


# -- spans ---------------------------------------------------------------------------


Triple = tuple[tuple[int, ...], int, int]


@dataclass(frozen=True, eq=False)
class SpanClass:
    """Isomorphism class of a span ``left <- U -> right``."""

    left: GSet
    right: GSet
    middle: tuple[Triple, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpanClass):
            return NotImplemented
        return self.left is other.left and self.right is other.right and self.middle == other.middle

    def __hash__(self) -> int:
        return hash(self.middle)

    def realize(self) -> tuple[GSet, GMap, GMap]:
        """A concrete span in this class: one ``H/Stab`` per triple."""
        G, over = self.left.group, self.left.over
        acts, lmap, rmap = [], [], []
        off = 0
        for stab, a, b in self.middle:
            S = G.subgroup(stab)
            U = cosets(S, over)
            reps = left_coset_reps(S, over)
            acts.append(np.where(U.action >= 0, U.action + off, -1))
            lmap.extend(self.left.act(z, a) for z in reps)
            rmap.extend(self.right.act(z, b) for z in reps)
            off += U.size
        act = np.vstack(acts) if acts else np.zeros((0, G.order), dtype=np.int64)
        U = GSet(G, act, over, label="U", check=False)
        return U, GMap(U, self.left, lmap), GMap(U, self.right, rmap)

    def is_transitive(self) -> bool:
        return len(self.middle) == 1


def span_class(f: GMap, g: GMap) -> SpanClass:
    """Canonical form of the span ``f.target <- U -> g.target``."""
    U = f.source
    if g.source is not U:
        raise GSetError("span legs must share their source")
    triples = []
    for _, _, orb in U.orbits:
        best = None
        for u in orb:
            stab = tuple(h for h in U.over.elements if U.action[u, h] == u)
            cand = (stab, int(f.table[u]), int(g.table[u]))
            if best is None or cand < best:
                best = cand
        triples.append(best)
    return SpanClass(f.target, g.target, tuple(sorted(triples, key=lambda t: (len(t[0]), t))))


def compose_spans(s: SpanClass, t: SpanClass) -> SpanClass:
    """``t ∘ s`` for ``s: S -> T`` and ``t: T -> V`` (pullback over ``T``)."""
    if s.right is not t.left:
        raise GSetError("spans are not composable: middle objects differ")
    U, f1, g1 = s.realize()
    V, f2, g2 = t.realize()
    P, p1, p2 = pullback(g1, f2)
    left = GMap(P, s.left, f1.table[p1.table], check=False)
    right = GMap(P, t.right, g2.table[p2.table], check=False)
    return span_class(left, right)


def identity_span(S: GSet) -> SpanClass:
    i = identity_map(S)
    return span_class(i, i)


def burnside_hom_basis(S: GSet, T: GSet) -> list[SpanClass]:
    """One span per orbit of ``S × T``: the orbit itself with its two projections."""
    _same_over(S, T)
    X = product(S, T)
    out = []
    for _, x, orb in X.orbits:
        index = np.full(X.size + 1, -1, dtype=np.int64)  # slot -1 keeps undefined columns at -1
        index[list(orb)] = np.arange(len(orb))
        act = index[X.action[list(orb)]]
        U = GSet(S.group, act, S.over, check=False)
        f = GMap(U, S, [v // T.size for v in orb], check=False)
        g = GMap(U, T, [v % T.size for v in orb], check=False)
        out.append(span_class(f, g))
    return out


def transitive_span_basis(S: GSet, T: GSet) -> list[SpanClass]:
    """All isomorphism classes of spans ``S <- U -> T`` with transitive ``U``.

    These form a basis of the group-completed hom group; over an orbit of
    ``S × T`` with stabilizer ``L`` there is one per ``L``-conjugacy class of
    subgroups of ``L``.
    """
    _same_over(S, T)
    out = []
    for L, x, _ in product(S, T).orbits:
        a, b = divmod(x, T.size)
        for cls in subgroup_classes(S.group, within=L):
            M = cls[0]
            U = cosets(M, S.over)
            reps = left_coset_reps(M, S.over)
            f = GMap(U, S, [S.act(z, a) for z in reps])
            g = GMap(U, T, [T.act(z, b) for z in reps])
            out.append(span_class(f, g))
    return sorted(set(out), key=lambda s: s.middle)


# -- group completion ------------------------------------------------------------------


class BurnsideElement:
    """Integer combination of transitive span classes between fixed ``left`` and ``right``."""

    def __init__(self, left: GSet, right: GSet, terms: Mapping[SpanClass, int] | Iterable[tuple[SpanClass, int]] = ()) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Counter = Counter()
        for s, c in items:
            if s.left is not left or s.right is not right:
                raise GSetError("span with the wrong ends")
            for piece in s.middle:
                acc[SpanClass(left, right, (piece,))] += c
        self.left, self.right = left, right
        self.terms = {s: c for s, c in sorted(acc.items(), key=lambda kv: kv[0].middle) if c}

    @classmethod
    def of(cls, s: SpanClass) -> BurnsideElement:
        return cls(s.left, s.right, [(s, 1)])

    def __add__(self, other: BurnsideElement) -> BurnsideElement:
        self._same(other)
        return BurnsideElement(self.left, self.right, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> BurnsideElement:
        return BurnsideElement(self.left, self.right, [(s, -c) for s, c in self.terms.items()])

    def __sub__(self, other: BurnsideElement) -> BurnsideElement:
        return self + (-other)

    def __rmul__(self, n: int) -> BurnsideElement:
        return BurnsideElement(self.left, self.right, [(s, n * c) for s, c in self.terms.items()])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        return self.left is other.left and self.right is other.right and self.terms == other.terms

    def _same(self, other: BurnsideElement) -> None:
        if self.left is not other.left or self.right is not other.right:
            raise GSetError("Burnside elements between different objects")

    def compose(self, first: BurnsideElement) -> BurnsideElement:
        """``self ∘ first``, bilinear extension of span composition."""
        out = []
        for s, a in first.terms.items():
            for t, b in self.terms.items():
                out.append((compose_spans(s, t), a * b))
        return BurnsideElement(first.left, self.right, out)

    def coefficient(self, s: SpanClass) -> int:
        return self.terms.get(s, 0)

    def __repr__(self) -> str:
        return " + ".join(f"{c}·{s.middle}" for s, c in self.terms.items()) or "0"


def burnside_ring_basis(G: FiniteGroup, over: Subgroup | None = None) -> tuple[GSet, list[SpanClass]]:
    """``pt`` and the transitive ``over``-sets ``over/M`` as spans ``pt <- over/M -> pt``."""
    over = over or G.whole
    pt = point(G, over)
    basis = []
    for M in subgroup_class_reps(over):
        U = cosets(M, over)
        f = GMap(U, pt, np.zeros(U.size, dtype=np.int64), check=False)
        basis.append(span_class(f, f))
    return pt, basis


def gset_element(pt: GSet, X: GSet) -> BurnsideElement:
    """``[X]`` in ``A(H)`` as a span ``pt <- X -> pt``."""
    f = GMap(X, pt, np.zeros(X.size, dtype=np.int64), check=False)
    return BurnsideElement.of(span_class(f, f))


def burnside_product(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """``[X]·[Y] = [X × Y]`` in the Burnside ring, extended bilinearly."""
    if a.left is not b.left or a.right is not a.left or b.right is not b.left or a.left.size != 1:
        raise GSetError("Burnside ring product needs elements over (pt, pt) for the same group")
    pt = a.left
    out = []
    for s, ca in a.terms.items():
        for t, cb in b.terms.items():
            X, _, _ = s.realize()
            Y, _, _ = t.realize()
            out.extend((k, v * ca * cb) for k, v in gset_element(pt, product(X, Y)).terms.items())
    return BurnsideElement(pt, pt, out)


def canonical_subgroup(S: Subgroup, within: Subgroup) -> Subgroup:
    return class_representative(S, within)
