"""Finite groups as Cayley tables.

Elements are the integers ``0..order-1`` and ``table[a, b]`` is the product
``a*b``.  Every representative choice in this module takes the identity
first and then the smallest unclaimed element index, so all outputs are
reproducible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 48


class GroupError(ValueError):
    """Base class for group-core errors."""


class GroupConstructionError(GroupError):
    pass


class ContainmentError(GroupError):
    pass


class GroupSizeError(GroupError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table.

    The table is validated on construction: Latin square, two-sided
    identity, and associativity over all triples.  A failing triple is
    named in the error message.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        label: str = "G",
        element_labels: Sequence[str] | None = None,
    ) -> None:
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupConstructionError(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupConstructionError("table entries must be element indices in range(order)")
        full = np.arange(n)
        for i in range(n):
            if not np.array_equal(np.sort(t[i]), full):
                raise GroupConstructionError(f"table is not a Latin square: row {i} repeats an element")
            if not np.array_equal(np.sort(t[:, i]), full):
                raise GroupConstructionError(f"table is not a Latin square: column {i} repeats an element")
        ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
        if not ids:
            raise GroupConstructionError("table has no two-sided identity")
        lhs = t[t]  # (i*j)*k
        rhs = t[:, t]  # i*(j*k)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k = (int(v) for v in bad[0])
            raise GroupConstructionError(f"table is not associative at (i,j,k)=({i},{j},{k})")
        t.setflags(write=False)
        self.table = t
        self.order = n
        self.identity = ids[0]
        inv = np.argmax(t == self.identity, axis=1).astype(np.int64)
        inv.setflags(write=False)
        self.inverse = inv
        self.label = label
        if element_labels is None:
            element_labels = [str(i) for i in range(n)]
        if len(element_labels) != n:
            raise GroupConstructionError("one label per element is required")
        self.element_labels = list(element_labels)
        self._by_label = {lab: i for i, lab in enumerate(self.element_labels)}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.label}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def prod(self, *elts: int) -> int:
        out = self.identity
        for a in elts:
            out = int(self.table[out, a])
        return out

    def conj(self, g: int, h: int) -> int:
        """Return ``g h g^-1``."""
        return int(self.table[self.table[g, h], self.inverse[g]])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def element(self, spec: int | str) -> int:
        """Look up an element by index or by label.

        Labels of permutation groups may be written in any cycle notation,
        e.g. ``"(1,2)"``, ``"(1 2)"`` or ``"(12)"``.
        """
        if isinstance(spec, (int, np.integer)):
            if not 0 <= int(spec) < self.order:
                raise GroupError(f"element index {spec} out of range for {self.label}")
            return int(spec)
        if spec in self._by_label:
            return self._by_label[spec]
        perms = getattr(self, "permutations", None)
        if perms is not None:
            perm = _parse_cycles(spec, len(perms[0]))
            if perm is not None and perm in self._perm_index:
                return self._perm_index[perm]
        raise GroupError(f"unknown element {spec!r} in {self.label}")

    @cached_property
    def _perm_index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.permutations)}

    # subgroup constructors

    def subgroup(self, elements: Iterable[int]) -> Subgroup:
        """Validated subgroup from an explicit element set."""
        elts = tuple(sorted({int(e) for e in elements}))
        s = set(elts)
        if self.identity not in s:
            raise GroupError("subgroup must contain the identity")
        for a in elts:
            if int(self.inverse[a]) not in s:
                raise GroupError(f"element set not closed under inverses at {a}")
            for b in elts:
                if int(self.table[a, b]) not in s:
                    raise GroupError(f"element set not closed under products at ({a},{b})")
        return Subgroup(self, elts)

    def generate(self, generators: Iterable[int | str]) -> Subgroup:
        gens = [self.element(g) for g in generators]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(self, tuple(sorted(seen)))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, (self.identity,))

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup in canonical form: sorted, deduplicated element indices."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        labels = [self.parent.element_labels[e] for e in self.elements]
        return f"Subgroup({', '.join(labels)})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.elements), self.elements)

    def issubset(self, other: Subgroup) -> bool:
        return self._set <= other._set

    def index_in(self, other: Subgroup) -> int:
        return other.order // self.order

    def label(self) -> str:
        return "{" + ", ".join(self.parent.element_labels[e] for e in self.elements) + "}"

    def as_group(self) -> FiniteGroup:
        """This subgroup as a standalone group; ``embedding[i]`` is the parent index."""
        return _subgroup_group(self)


def _subgroup_group(H: Subgroup) -> FiniteGroup:
    G = H.parent
    pos = {e: i for i, e in enumerate(H.elements)}
    table = [[pos[G.mul(a, b)] for b in H.elements] for a in H.elements]
    out = FiniteGroup(table, label=f"{G.label}|{H.order}", element_labels=[G.element_labels[e] for e in H.elements])
    out.embedding = H.elements  # type: ignore[attr-defined]
    return out


# ---------------------------------------------------------------- builders


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p*q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(q)))


def _cycle_label(p: tuple[int, ...]) -> str:
    seen: set[int] = set()
    cycles = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        cycles.append("(" + ",".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles) or "()"


def _parse_cycles(text: str, degree: int) -> tuple[int, ...] | None:
    text = text.strip()
    if text in ("()", "e", "id", ""):
        return tuple(range(degree))
    groups = re.findall(r"\(([^()]*)\)", text)
    if not groups or re.sub(r"\([^()]*\)", "", text).strip():
        return None
    perm = list(range(degree))
    for body in reversed(groups):
        body = body.strip()
        if "," in body or " " in body:
            pts = [int(x) - 1 for x in re.split(r"[,\s]+", body) if x]
        else:
            pts = [int(c) - 1 for c in body]
        if any(not 0 <= x < degree for x in pts) or len(set(pts)) != len(pts):
            return None
        cyc = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            cyc[a] = b
        perm = [cyc[perm[x]] for x in range(degree)]
    return tuple(perm)


def from_permutations(perms: Iterable[Sequence[int]], label: str) -> FiniteGroup:
    """Tabulate a closed set of permutations (0-based images), sorted lexicographically."""
    plist = sorted({tuple(int(x) for x in p) for p in perms})
    index = {p: i for i, p in enumerate(plist)}
    try:
        table = [[index[_compose(p, q)] for q in plist] for p in plist]
    except KeyError as exc:
        raise GroupConstructionError("permutation set is not closed under composition") from exc
    G = FiniteGroup(table, label=label, element_labels=[_cycle_label(p) for p in plist])
    G.permutations = plist  # type: ignore[attr-defined]
    return G


def permutation_closure(generators: Iterable[Sequence[int]], degree: int, label: str) -> FiniteGroup:
    ident = tuple(range(degree))
    gens = [tuple(int(x) for x in g) for g in generators]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return from_permutations(seen, label)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError(f"cyclic order must be positive, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["e"] + ["g" if i == 1 else f"g^{i}" for i in range(1, n)]
    G = FiniteGroup(table, label=f"C{n}", element_labels=labels)
    G.cyclic_generator = 1 if n > 1 else 0  # type: ignore[attr-defined]
    return G


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon (order 2n), as permutations of its vertices."""
    if n < 3:
        if n == 2:
            return direct_product(cyclic(2), cyclic(2), label="D2")
        if n == 1:
            G = cyclic(2)
            G.label = "D1"
            return G
        raise GroupConstructionError(f"dihedral parameter must be positive, got {n}")
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_closure([rot, ref], n, label=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise GroupConstructionError(f"symmetric(n) supports 1 <= n <= 5, got {n}")
    return from_permutations(itertools.permutations(range(n)), label=f"S{n}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup, label: str | None = None) -> FiniteGroup:
    n2 = G2.order
    n = G1.order * n2
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        a1, a2 = divmod(a, n2)
        table[a] = np.repeat(G1.table[a1], n2) * n2 + np.tile(G2.table[a2], G1.order)
    labels = [f"({l1};{l2})" for l1 in G1.element_labels for l2 in G2.element_labels]
    return FiniteGroup(table, label=label or f"{G1.label}x{G2.label}", element_labels=labels)


_CALL = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$")


def _split_args(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return out


def build_group(spec: str | dict | FiniteGroup) -> FiniteGroup:
    """Build a group from a description.

    Accepted forms: ``"cyclic(n)"``, ``"dihedral(n)"``, ``"symmetric(n)"``,
    ``"product(spec, spec, ...)"``, or ``{"table": [[...]]}`` with optional
    ``"labels"``.  Dict forms ``{"cyclic": n}`` etc. are also accepted.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        if "table" in spec:
            return FiniteGroup(spec["table"], label=spec.get("label", "G"), element_labels=spec.get("labels"))
        if len(spec) != 1:
            raise GroupError(f"cannot interpret group description {spec!r}")
        (kind, arg), = spec.items()
        if kind == "product":
            return _product_all([build_group(a) for a in arg])
        return build_group(f"{kind}({arg})")
    m = _CALL.match(str(spec))
    if not m:
        raise GroupError(f"cannot parse group description {spec!r}")
    kind, args = m.group(1), _split_args(m.group(2))
    if kind == "product":
        if len(args) < 2:
            raise GroupError("product(...) needs at least two factors")
        return _product_all([build_group(a) for a in args])
    builders = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}
    if kind not in builders or len(args) != 1:
        raise GroupError(f"cannot parse group description {spec!r}")
    try:
        n = int(args[0])
    except ValueError as exc:
        raise GroupError(f"group size must be an integer in {spec!r}") from exc
    return builders[kind](n)


def _product_all(groups: list[FiniteGroup]) -> FiniteGroup:
    out = groups[0]
    for g in groups[1:]:
        out = direct_product(out, g)
    return out


# --------------------------------------------------------------- subgroups


def _require_subset(small: Subgroup, big: Subgroup, what: str) -> None:
    if small.parent is not big.parent:
        raise ContainmentError(f"{what}: subgroups belong to different groups")
    if not small.issubset(big):
        extra = sorted(small._set - big._set)
        raise ContainmentError(f"{what}: {small!r} is not contained in {big!r} (element {extra[0]})")


def enumerate_subgroups(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[Subgroup]:
    """All subgroups of ``G`` sorted by ``(order, elements)``."""
    if G.order > max_order:
        raise GroupSizeError(f"|G| = {G.order} exceeds the subgroup enumeration bound {max_order}")
    cache = G.__dict__.get("_subgroups_cache")
    if cache is not None:
        return list(cache)
    found: dict[tuple[int, ...], Subgroup] = {}
    cyclics = {G.generate([g]) for g in G.elements()}
    for c in cyclics:
        found[c.elements] = c
    frontier = list(found.values())
    while frontier:
        nxt = []
        for H in frontier:
            for c in cyclics:
                if c.issubset(H):
                    continue
                J = G.generate(H.elements + c.elements)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    out = sorted(found.values(), key=lambda s: s.key)
    G._subgroups_cache = tuple(out)  # type: ignore[attr-defined]
    return out


def intersect(H: Subgroup, K: Subgroup) -> Subgroup:
    return Subgroup(H.parent, tuple(sorted(H._set & K._set)))


def conjugate_subgroup(g: int, H: Subgroup) -> Subgroup:
    """``gHg^-1``."""
    G = H.parent
    return Subgroup(G, tuple(sorted({G.conj(g, h) for h in H.elements})))


def upper_conjugate(H: Subgroup, g: int) -> Subgroup:
    """``H^g = g^-1 H g``."""
    return conjugate_subgroup(H.parent.inv(g), H)


def subconjugacy_witness(H: Subgroup, K: Subgroup) -> int | None:
    """Smallest-index ``g`` with ``gHg^-1 ⊆ K``, or ``None``."""
    if K.order % H.order:
        return None
    G = H.parent
    for g in G.elements():
        if all(G.conj(g, h) in K for h in H.elements):
            return g
    return None


def _ordered(H: Subgroup) -> list[int]:
    e = H.parent.identity
    return [e] + [x for x in H.elements if x != e]


def right_coset_reps(H: Subgroup, K: Subgroup) -> list[int]:
    """Representatives ``y_i`` with ``K = ⊔ H y_i``; the identity comes first."""
    _require_subset(H, K, "right_coset_reps")
    G = K.parent
    claimed: set[int] = set()
    reps = []
    for y in _ordered(K):
        if y in claimed:
            continue
        reps.append(y)
        claimed.update(G.mul(h, y) for h in H.elements)
    return reps


def left_coset_reps(H: Subgroup, K: Subgroup) -> list[int]:
    """Representatives ``z_j`` with ``K = ⊔ z_j H``; the identity comes first."""
    _require_subset(H, K, "left_coset_reps")
    G = K.parent
    claimed: set[int] = set()
    reps = []
    for z in _ordered(K):
        if z in claimed:
            continue
        reps.append(z)
        claimed.update(G.mul(z, h) for h in H.elements)
    return reps


def double_coset(J: Subgroup, x: int, K: Subgroup) -> frozenset[int]:
    G = J.parent
    return frozenset(G.mul(G.mul(j, x), k) for j in J.elements for k in K.elements)


def double_coset_reps(J: Subgroup, K: Subgroup, H: Subgroup, prefer: str = "smallest") -> list[tuple[int, int]]:
    """Representatives of ``J\\H/K`` with the size of each double coset.

    ``prefer="smallest"`` (the default) claims the identity first and then the
    smallest unclaimed index.  ``prefer="largest"`` returns, for the same
    sequence of double cosets, their largest-index element instead; it is
    used to cross-check that the Mackey formula does not depend on the
    transversal.
    """
    _require_subset(J, H, "double_coset_reps")
    _require_subset(K, H, "double_coset_reps")
    claimed: set[int] = set()
    out = []
    for x in _ordered(H):
        if x in claimed:
            continue
        dc = double_coset(J, x, K)
        claimed |= dc
        rep = x if prefer == "smallest" else max(dc)
        out.append((rep, len(dc)))
    return out


def refined_transversal(J: Subgroup, K: Subgroup, H: Subgroup, prefer: str = "smallest") -> list[tuple[int, list[int]]]:
    """Double coset reps ``x_i`` of ``J\\H/K`` with right coset reps ``β_{i,l}`` of ``(J^{x_i} ∩ K)\\K``.

    The products ``x_i β_{i,l}`` form a right transversal of ``J`` in ``H``.
    """
    out = []
    for x, _ in double_coset_reps(J, K, H, prefer=prefer):
        inner = intersect(upper_conjugate(J, x), K)
        out.append((x, right_coset_reps(inner, K)))
    return out


def subgroup_classes(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER, within: Subgroup | None = None) -> list[list[Subgroup]]:
    """Conjugacy classes of subgroups of ``within`` (default ``G``) under conjugation by ``within``.

    Classes are ordered by their first member; members are sorted by key.
    """
    ambient = within or G.whole
    subs = [S for S in enumerate_subgroups(G, max_order) if S.issubset(ambient)]
    seen: set[tuple[int, ...]] = set()
    classes = []
    for S in subs:
        if S.elements in seen:
            continue
        cls = sorted({conjugate_subgroup(g, S) for g in ambient.elements}, key=lambda s: s.key)
        seen.update(c.elements for c in cls)
        classes.append(cls)
    return classes


def class_representative(S: Subgroup, within: Subgroup) -> Subgroup:
    """Canonical (smallest-key) member of the ``within``-conjugacy class of ``S``."""
    return min((conjugate_subgroup(g, S) for g in within.elements), key=lambda s: s.key)
