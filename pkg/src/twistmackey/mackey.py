"""Mackey functors on a finite group, the axiom checker and concrete instances.

Orientation: for ``H ⊆ K``, ``res[H, K]: M(K) -> M(H)`` and
``tr[H, K]: M(H) -> M(K)``; ``conj[g, H]: M(H) -> M(gHg^-1)``.  Values are
stored for every subgroup (not just up to conjugacy) and conjugations for
every pair ``(g, H)``, so each axiom is checked literally.

The double coset formula (MF6) reads, for ``J, K ⊆ H``,

    res[J,H] ∘ tr[K,H] = Σ_{x ∈ J\\H/K} tr[J∩xKx⁻¹, J] ∘ conj[x] ∘ res[J^x∩K, K]

with ``J^x = x⁻¹Jx``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .algebra import AlgebraHom, RightBasisOracle, StructureAlgebra, subalgebra
from .burnside import cosets, orbit_decompose, subgroup_class_reps
from .fields import FiniteField
from .groups import (
    FiniteGroup,
    Subgroup,
    class_representative,
    conjugate_subgroup,
    double_coset_reps,
    enumerate_subgroups,
    intersect,
    left_coset_reps,
    upper_conjugate,
)
from .modules import k0_induced_map
from .twisted import GRing, UnsupportedInstanceError, auslander_map, fixed_subring, galois_gring


class MackeyError(ValueError):
    pass


class ExternalDataError(MackeyError):
    """The instance relies on formulas from outside this package's theory."""


class OracleMismatchError(MackeyError):
    pass


# -- values and maps ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AbValue:
    """``Z^rank`` (kind ``free``), a tabulated finite group (``finite``) or ``Z/order`` (``cyclic``)."""

    kind: str
    label: str
    rank: int = 0
    order: int = 0
    add_table: np.ndarray | None = None
    zero: int = 0
    element_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "finite":
            t = self.add_table
            n = self.order
            idx = np.arange(n)
            if t is None or t.shape != (n, n):
                raise MackeyError(f"{self.label}: addition table must be {n}x{n}")
            if not np.array_equal(t, t.T):
                raise MackeyError(f"{self.label}: group is not abelian")
            if not np.array_equal(t[self.zero], idx):
                raise MackeyError(f"{self.label}: zero is not neutral")
            if not (t == self.zero).any(axis=1).all():
                raise MackeyError(f"{self.label}: inverses missing")
            if not np.array_equal(t[t], t[:, t]):
                raise MackeyError(f"{self.label}: addition is not associative")
        elif self.kind not in ("free", "cyclic"):
            raise MackeyError(f"unknown value kind {self.kind!r}")

    @classmethod
    def free(cls, rank: int, label: str = "") -> AbValue:
        return cls("free", label or f"Z^{rank}", rank=rank)

    @classmethod
    def cyclic(cls, n: int, label: str = "") -> AbValue:
        return cls("cyclic", label or f"Z/{n}", order=n)

    @classmethod
    def finite(cls, add_table: np.ndarray, zero: int, label: str, element_labels=()) -> AbValue:
        t = np.asarray(add_table, dtype=np.int64)
        t.setflags(write=False)
        return cls("finite", label, order=t.shape[0], add_table=t, zero=zero, element_labels=tuple(element_labels))

    @property
    def size(self) -> int:
        """Rank for free values, order otherwise."""
        return self.rank if self.kind == "free" else self.order

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == "finite":
            return self.add_table[a, b]
        return (a + b) % self.order

    def describe(self) -> str:
        return self.label

    def same(self, other: AbValue) -> bool:
        return self.kind == other.kind and self.size == other.size and self.label == other.label


class AbMap:
    """Integer matrix (free values) or element table (finite and cyclic values)."""

    def __init__(self, source: AbValue, target: AbValue, data, check: bool = True) -> None:
        if (source.kind == "free") != (target.kind == "free"):
            raise MackeyError("maps between free and finite values are not used here")
        self.source, self.target = source, target
        d = np.asarray(data, dtype=np.int64)
        if source.kind == "free":
            d = d.reshape(target.rank, source.rank)
        else:
            d = d.reshape(source.order)
        d.setflags(write=False)
        self.data = d
        if check and source.kind != "free":
            self._check_additive()

    def _check_additive(self) -> None:
        S, T, f = self.source, self.target, self.data
        if ((f < 0) | (f >= T.order)).any():
            raise MackeyError("map values out of range")
        if S.kind == "cyclic" and S.order > 512:
            # a map out of a cyclic group is additive iff f(a) = a·f(1)
            ok = np.array_equal(f, (np.arange(S.order) * int(f[1 % S.order])) % T.order) if T.kind == "cyclic" else False
            if not ok:
                raise MackeyError(f"map {S.label} -> {T.label} is not additive")
            return
        a = np.arange(S.order)
        lhs = f[S.add(a[:, None], a[None, :])]
        rhs = T.add(f[:, None], f[None, :])
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise MackeyError(f"map {S.label} -> {T.label} is not additive at {tuple(int(v) for v in bad[0])}")

    @classmethod
    def identity(cls, V: AbValue) -> AbMap:
        if V.kind == "free":
            return cls(V, V, np.eye(V.rank, dtype=np.int64), check=False)
        return cls(V, V, np.arange(V.order), check=False)

    @classmethod
    def zero(cls, S: AbValue, T: AbValue) -> AbMap:
        if S.kind == "free":
            return cls(S, T, np.zeros((T.rank, S.rank), dtype=np.int64), check=False)
        z = 0 if T.kind == "cyclic" else T.zero
        return cls(S, T, np.full(S.order, z), check=False)

    def compose(self, first: AbMap) -> AbMap:
        """``self ∘ first``."""
        if first.target is not self.source:
            raise MackeyError(f"cannot compose {first.source.label}->{first.target.label} with {self.source.label}->{self.target.label}")
        if self.source.kind == "free":
            return AbMap(first.source, self.target, self.data @ first.data, check=False)
        return AbMap(first.source, self.target, self.data[first.data], check=False)

    def __add__(self, other: AbMap) -> AbMap:
        if self.source is not other.source or self.target is not other.target:
            raise MackeyError("sum of maps with different ends")
        if self.source.kind == "free":
            return AbMap(self.source, self.target, self.data + other.data, check=False)
        return AbMap(self.source, self.target, self.target.add(self.data, other.data), check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbMap):
            return NotImplemented
        return self.source is other.source and self.target is other.target and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:  # pragma: no cover - maps are not used as keys
        return hash(self.data.tobytes())

    def to_json(self):
        return self.data.tolist()


Key = tuple[int, ...]


@dataclass
class MackeyData:
    group: FiniteGroup
    subgroups: list[Subgroup]
    values: dict[Key, AbValue]
    res: dict[tuple[Key, Key], AbMap]
    tr: dict[tuple[Key, Key], AbMap]
    conj: dict[tuple[int, Key], AbMap]
    label: str = "M"
    flags: tuple[str, ...] = ()
    extras: dict = field(default_factory=dict)

    def value(self, H: Subgroup) -> AbValue:
        return self.values[H.elements]

    def R(self, H: Subgroup, K: Subgroup) -> AbMap:
        return self.res[(H.elements, K.elements)]

    def T(self, H: Subgroup, K: Subgroup) -> AbMap:
        return self.tr[(H.elements, K.elements)]

    def C(self, g: int, H: Subgroup) -> AbMap:
        return self.conj[(g, H.elements)]


def build_mackey(
    G: FiniteGroup,
    value: Callable[[Subgroup], AbValue],
    res: Callable[[Subgroup, Subgroup, AbValue, AbValue], AbMap],
    tr: Callable[[Subgroup, Subgroup, AbValue, AbValue], AbMap],
    conj: Callable[[int, Subgroup, AbValue, AbValue], AbMap],
    label: str,
    max_order: int = 48,
) -> MackeyData:
    subs = enumerate_subgroups(G, max_order)
    vals = {H.elements: value(H) for H in subs}
    R, T, C = {}, {}, {}
    for H in subs:
        for K in subs:
            if H.issubset(K):
                R[(H.elements, K.elements)] = res(H, K, vals[K.elements], vals[H.elements])
                T[(H.elements, K.elements)] = tr(H, K, vals[H.elements], vals[K.elements])
        for g in G.elements():
            gH = conjugate_subgroup(g, H)
            C[(g, H.elements)] = conj(g, H, vals[H.elements], vals[gH.elements])
    M = MackeyData(G, subs, vals, R, T, C, label=label)
    _validate(M)
    return M


def _validate(M: MackeyData) -> None:
    for (h, k), f in M.res.items():
        if f.source is not M.values[k] or f.target is not M.values[h]:
            raise MackeyError("restriction map has the wrong ends")
    for (h, k), f in M.tr.items():
        if f.source is not M.values[h] or f.target is not M.values[k]:
            raise MackeyError("transfer map has the wrong ends")


# -- axiom checker ---------------------------------------------------------------------------


AXIOMS = ("MF0", "MF1", "MF2", "MF3", "MF4", "MF5", "MF6")


@dataclass
class AxiomResult:
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, witness: str) -> None:
        self.failures.append(witness)


@dataclass
class AxiomReport:
    label: str
    results: dict[str, AxiomResult]
    transversals_agree: bool = True

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failing(self) -> list[str]:
        return [n for n, r in self.results.items() if not r.passed]

    def to_json(self) -> dict:
        return {
            n: {"passed": r.passed, "instances": r.instances, "failures": r.failures[:10]} for n, r in self.results.items()
        } | {"MF6-transversal-independence": self.transversals_agree}


def mf6_rhs(M: MackeyData, J: Subgroup, K: Subgroup, H: Subgroup, prefer: str = "smallest") -> AbMap:
    total = AbMap.zero(M.value(K), M.value(J))
    for x, _ in double_coset_reps(J, K, H, prefer=prefer):
        L = intersect(upper_conjugate(J, x), K)  # J^x ∩ K
        Lx = conjugate_subgroup(x, L)  # J ∩ xKx^-1
        term = M.T(Lx, J).compose(M.C(x, L)).compose(M.R(L, K))
        total = total + term
    return total


def check_axioms(M: MackeyData) -> AxiomReport:
    G, subs = M.group, M.subgroups
    lab = G.element_labels
    res = {n: AxiomResult(n) for n in AXIOMS}
    name = lambda S: S.label()  # noqa: E731
    for H in subs:
        r = res["MF0"]
        r.instances += 3
        if M.R(H, H) != AbMap.identity(M.value(H)):
            r.fail(f"res[H,H] ≠ id for H={name(H)}")
        if M.T(H, H) != AbMap.identity(M.value(H)):
            r.fail(f"tr[H,H] ≠ id for H={name(H)}")
        for h in H.elements:
            r.instances += 1
            if M.C(h, H) != AbMap.identity(M.value(H)):
                r.fail(f"conj[{lab[h]}] ≠ id on M({name(H)})")
    for J in subs:
        for H in subs:
            if not J.issubset(H):
                continue
            for K in subs:
                if not H.issubset(K):
                    continue
                res["MF1"].instances += 1
                if M.R(J, H).compose(M.R(H, K)) != M.R(J, K):
                    res["MF1"].fail(f"res∘res ≠ res for J={name(J)}, H={name(H)}, K={name(K)}")
                res["MF2"].instances += 1
                if M.T(H, K).compose(M.T(J, H)) != M.T(J, K):
                    res["MF2"].fail(f"tr∘tr ≠ tr for J={name(J)}, H={name(H)}, K={name(K)}")
    for H in subs:
        for g in G.elements():
            gH = conjugate_subgroup(g, H)
            for h in G.elements():
                hH = conjugate_subgroup(h, H)
                res["MF3"].instances += 1
                if M.C(g, hH).compose(M.C(h, H)) != M.C(G.mul(g, h), H):
                    res["MF3"].fail(f"conj[{lab[g]}]∘conj[{lab[h]}] ≠ conj[{lab[G.mul(g, h)]}] on M({name(H)})")
            for K in subs:
                if not H.issubset(K):
                    continue
                gK = conjugate_subgroup(g, K)
                res["MF4"].instances += 1
                if M.C(g, H).compose(M.R(H, K)) != M.R(gH, gK).compose(M.C(g, K)):
                    res["MF4"].fail(f"conj∘res ≠ res∘conj for g={lab[g]}, H={name(H)}, K={name(K)}")
                res["MF5"].instances += 1
                if M.C(g, K).compose(M.T(H, K)) != M.T(gH, gK).compose(M.C(g, H)):
                    res["MF5"].fail(f"conj∘tr ≠ tr∘conj for g={lab[g]}, H={name(H)}, K={name(K)}")
    agree = True
    for H in subs:
        for J in subs:
            if not J.issubset(H):
                continue
            for K in subs:
                if not K.issubset(H):
                    continue
                lhs = M.R(J, H).compose(M.T(K, H))
                rhs = mf6_rhs(M, J, K, H, "smallest")
                alt = mf6_rhs(M, J, K, H, "largest")
                res["MF6"].instances += 2
                if lhs != rhs:
                    res["MF6"].fail(f"double coset formula fails for J={name(J)}, K={name(K)}, H={name(H)}")
                if rhs != alt:
                    agree = False
                    res["MF6"].fail(f"MF6 depends on the transversal for J={name(J)}, K={name(K)}, H={name(H)}")
    return AxiomReport(M.label, res, agree)


# -- instances ---------------------------------------------------------------------------------


def constant_functor(G: FiniteGroup) -> MackeyData:
    """``M(H) = Z`` with every map the identity: fails the double coset formula."""
    vals = {}

    def value(H):
        vals.setdefault(H.elements, AbValue.free(1, "Z"))
        return vals[H.elements]

    ident = lambda *a: AbMap(a[-2], a[-1], [[1]], check=False)  # noqa: E731
    return build_mackey(G, value, ident, ident, ident, label=f"constant({G.label})")


def _burnside_index(H: Subgroup) -> tuple[list[Subgroup], dict[Key, int]]:
    reps = subgroup_class_reps(H)
    return reps, {S.elements: i for i, S in enumerate(reps)}


def burnside_mackey(G: FiniteGroup, max_order: int = 48) -> MackeyData:
    """``M(H) = A(H)`` on the basis of transitive ``H``-sets ``H/M`` (one ``M`` per class)."""
    bases: dict[Key, tuple[list[Subgroup], dict[Key, int]]] = {}

    def basis(H):
        if H.elements not in bases:
            bases[H.elements] = _burnside_index(H)
        return bases[H.elements]

    def value(H):
        return AbValue.free(len(basis(H)[0]), f"A({H.label()})")

    def res(H, K, VK, VH):
        repsK, _ = basis(K)
        _, idxH = basis(H)
        mat = np.zeros((VH.rank, VK.rank), dtype=np.int64)
        for c, M_ in enumerate(repsK):
            for stab, _ in orbit_decompose(cosets(M_, K).restrict(H)):
                mat[idxH[class_representative(stab, H).elements], c] += 1
        return AbMap(VK, VH, mat)

    def tr(H, K, VH, VK):
        repsH, _ = basis(H)
        _, idxK = basis(K)
        mat = np.zeros((VK.rank, VH.rank), dtype=np.int64)
        for c, M_ in enumerate(repsH):
            mat[idxK[class_representative(M_, K).elements], c] += 1
        return AbMap(VH, VK, mat)

    def conj(g, H, VH, VgH):
        repsH, _ = basis(H)
        gH = conjugate_subgroup(g, H)
        _, idx = basis(gH)
        mat = np.zeros((VgH.rank, VH.rank), dtype=np.int64)
        for c, M_ in enumerate(repsH):
            mat[idx[class_representative(conjugate_subgroup(g, M_), gH).elements], c] += 1
        return AbMap(VH, VgH, mat)

    M = build_mackey(G, value, res, tr, conj, label=f"Burnside({G.label})", max_order=max_order)
    M.extras["bases"] = {k: [S.elements for S in v[0]] for k, v in bases.items()}
    return M


def _algebra_mackey(
    G: FiniteGroup,
    algebra_of: Callable[[Subgroup], StructureAlgebra],
    incl: Callable[[Subgroup, Subgroup], AlgebraHom],
    conj_hom: Callable[[int, Subgroup], AlgebraHom],
    label: str,
    max_order: int = 48,
) -> MackeyData:
    def value(H):
        return AbValue.free(len(algebra_of(H).blocks), f"K0({H.label()})")

    def res(H, K, VK, VH):
        return AbMap(VK, VH, k0_induced_map(incl(H, K), "restrict"))

    def tr(H, K, VH, VK):
        return AbMap(VH, VK, k0_induced_map(incl(H, K), "extend"))

    def conj(g, H, VH, VgH):
        return AbMap(VH, VgH, k0_induced_map(conj_hom(g, H), "extend"))

    return build_mackey(G, value, res, tr, conj, label=label, max_order=max_order)


def k0_twisted_mackey(R: GRing, max_order: int = 48) -> MackeyData:
    """``M(H) = K0(R_θ[H])``: transfer and restriction along inclusions, conjugation along ``γ^g``."""
    G = R.group
    M = _algebra_mackey(
        G,
        lambda H: R.algebra(H).algebra,
        lambda H, K: R.algebra_hom(H, G.identity, K),
        lambda g, H: R.algebra_hom(H, G.inv(g), conjugate_subgroup(g, H)),
        label=f"K0({R.label})",
        max_order=max_order,
    )
    M.extras["idempotents"] = {H.elements: [b.idempotent.tolist() for b in R.algebra(H).algebra.blocks] for H in M.subgroups}
    return M


def units_mackey(R: GRing, max_order: int = 48) -> MackeyData:
    """``M(H) = (R^H)^×``: inclusion, norm, and ``θ_g``."""
    F = R.ring
    G = R.group
    if not isinstance(F, FiniteField):
        raise UnsupportedInstanceError("the units instance needs a finite field")
    fixed: dict[Key, list[int]] = {}

    def elements(H):
        if H.elements not in fixed:
            fixed[H.elements] = [r for r in fixed_subring(R, H).elements if r != F.zero]
        return fixed[H.elements]

    def value(H):
        els = elements(H)
        idx = {r: i for i, r in enumerate(els)}
        table = np.array([[idx[F.mul(a, b)] for b in els] for a in els], dtype=np.int64)
        return AbValue.finite(table, idx[F.one], f"({F.label})^{H.label()}×", [F.element_labels[r] for r in els])

    def res(H, K, VK, VH):
        idxH = {r: i for i, r in enumerate(elements(H))}
        return AbMap(VK, VH, [idxH[r] for r in elements(K)])

    def tr(H, K, VH, VK):
        idxK = {r: i for i, r in enumerate(elements(K))}
        reps = left_coset_reps(H, K)
        out = []
        for r in elements(H):
            n = F.one
            for s in reps:
                n = F.mul(n, int(R.theta[s, r]))
            out.append(idxK[n])
        return AbMap(VH, VK, out)

    def conj(g, H, VH, VgH):
        idx = {r: i for i, r in enumerate(elements(conjugate_subgroup(g, H)))}
        return AbMap(VH, VgH, [idx[int(R.theta[g, r])] for r in elements(H)])

    M = build_mackey(G, value, res, tr, conj, label=f"units({R.label})", max_order=max_order)
    M.extras["elements"] = {k: v for k, v in fixed.items()}
    return M


def units_galois_mackey(p: int, k: int) -> MackeyData:
    return units_mackey(galois_gring(p, k))


# -- endomorphism rings ----------------------------------------------------------------------


@dataclass(eq=False)
class EndomorphismData:
    mackey: MackeyData
    squares: dict[str, int]
    square_failures: list[str]
    algebras: dict[Key, StructureAlgebra]

    @property
    def squares_commute(self) -> bool:
        return not self.square_failures


def endomorphism_mackey(R: GRing, max_order: int = 48) -> EndomorphismData:
    """``M(H) = K0(End_{R^H}(R))`` with maps transported along the Auslander isomorphisms."""
    G = R.group
    F = R.ring
    subs = enumerate_subgroups(G, max_order)
    aus = {}
    for H in subs:
        a = auslander_map(R, H)
        if not a.is_isomorphism:
            raise UnsupportedInstanceError(f"Auslander map is not an isomorphism for H={H.label()}")
        aus[H.elements] = a
    p, k = F.p, F.k
    Theta = {g: F.automorphism_matrix(R.theta[g]) for g in G.elements()}

    # End_{R^H}(R) inside M_k(GF(p)), basis = echelon basis of the centralizer
    ends: dict[Key, StructureAlgebra] = {}
    bases: dict[Key, np.ndarray] = {}
    full = matrix_algebra(p, k)
    for H in subs:
        a = aus[H.elements]
        eye = np.eye(k, dtype=np.int64)
        rows = [(np.kron(F.multiplication_matrix(c), eye) - np.kron(eye, F.multiplication_matrix(c).T)) % p for c in a.fixed_basis]
        B = linalg.kernel(np.vstack(rows), p)
        bases[H.elements] = B
        ends[H.elements] = subalgebra(full, B)

    def coords(H, mats):
        """Coordinates in End(H)'s basis of flattened ``k x k`` matrices (rows)."""
        return linalg.solve(bases[H.elements].T, np.asarray(mats).reshape(-1, k * k).T, p)

    phis = {H.elements: AlgebraHom(R.algebra(H).algebra, ends[H.elements], coords(H, aus[H.elements].images), label="Φ") for H in subs}
    phi_inv = {h: linalg.inverse(f.matrix, p) for h, f in phis.items()}

    incl_cache: dict = {}

    def incl(H, K):
        key = (H.elements, K.elements)
        if key not in incl_cache:
            M = coords(K, bases[H.elements])
            rho = R.algebra_hom(H, G.identity, K)
            incl_cache[key] = AlgebraHom(ends[H.elements], ends[K.elements], M, right_basis=_transport(rho, phis[H.elements], phis[K.elements], phi_inv[K.elements]), label="ι")
        return incl_cache[key]

    conj_cache: dict = {}

    def conj_hom(g, H):
        key = (g, H.elements)
        if key not in conj_cache:
            gH = conjugate_subgroup(g, H)
            Tg, Tgi = Theta[g], Theta[G.inv(g)]
            mats = np.array([Tg @ X.reshape(k, k) @ Tgi % p for X in bases[H.elements]])
            M = coords(gH, mats)
            gam = R.algebra_hom(H, G.inv(g), gH)
            conj_cache[key] = AlgebraHom(ends[H.elements], ends[gH.elements], M, right_basis=_transport(gam, phis[H.elements], phis[gH.elements], phi_inv[gH.elements]), label="κ")
        return conj_cache[key]

    mackey = _algebra_mackey(G, lambda H: ends[H.elements], incl, conj_hom, label=f"K0(End)({R.label})", max_order=max_order)

    failures: list[str] = []
    counts = {"inclusion": 0, "conjugation": 0}
    for H in subs:
        for K in subs:
            if H.issubset(K):
                counts["inclusion"] += 1
                lhs = phis[K.elements].matrix @ R.algebra_hom(H, G.identity, K).matrix % p
                rhs = incl(H, K).matrix @ phis[H.elements].matrix % p
                if not np.array_equal(lhs, rhs):
                    failures.append(f"inclusion square fails for H={H.label()}, K={K.label()}")
        for g in G.elements():
            gH = conjugate_subgroup(g, H)
            counts["conjugation"] += 1
            lhs = phis[gH.elements].matrix @ R.algebra_hom(H, G.inv(g), gH).matrix % p
            rhs = conj_hom(g, H).matrix @ phis[H.elements].matrix % p
            if not np.array_equal(lhs, rhs):
                failures.append(f"conjugation square fails for g={G.element_labels[g]}, H={H.label()}")
    return EndomorphismData(mackey, counts, failures, ends)


def matrix_algebra(p: int, k: int) -> StructureAlgebra:
    """``M_k(GF(p))`` on matrix units ``E_ab`` (index ``a·k + b``)."""
    c = np.zeros((k * k, k * k, k * k), dtype=np.int64)
    for a in range(k):
        for b in range(k):
            for d in range(k):
                c[a * k + b, b * k + d, a * k + d] = 1
    return StructureAlgebra(p, c, np.eye(k, dtype=np.int64).reshape(-1), check=False)


def _transport(f: AlgebraHom, phi_s: AlgebraHom, phi_t: AlgebraHom, phi_t_inv: np.ndarray) -> RightBasisOracle:
    """Right-basis oracle of ``f`` carried across isomorphisms ``phi_s``, ``phi_t``."""
    rb = f.right_basis
    p = f.source.p
    reps = (phi_t.matrix @ rb.reps.T % p).T

    def express(b):
        a = rb.express(phi_t_inv @ np.asarray(b, dtype=np.int64) % p)
        return (phi_s.matrix @ a.T % p).T

    return RightBasisOracle(reps, express, rb.labels)


# -- trivial action cross-check -------------------------------------------------------------


@dataclass(eq=False)
class ComparisonReport:
    label: str
    values_equal: bool
    constants_equal: bool
    mismatches: list[str]
    compared: int

    @property
    def identical(self) -> bool:
        return self.values_equal and not self.mismatches


def group_algebra(F: FiniteField, H: Subgroup) -> StructureAlgebra:
    """``F[H]`` over the prime field, built from the group table alone."""
    G = H.parent
    hs = list(H.elements)
    pos = {h: i for i, h in enumerate(hs)}
    k, p = F.k, F.p
    n = len(hs)
    c = np.zeros((n * k, n * k, n * k), dtype=np.int64)
    for a, g in enumerate(hs):
        for b, h in enumerate(hs):
            t = pos[G.mul(g, h)]
            for i in range(k):
                for j in range(k):
                    c[a * k + i, b * k + j, t * k : (t + 1) * k] = F.to_vector(F.mul(p**i, p**j))
    unit = np.zeros(n * k, dtype=np.int64)
    unit[pos[G.identity] * k] = 1
    return StructureAlgebra(p, c, unit)


def _group_algebra_hom(F: FiniteField, A: StructureAlgebra, B: StructureAlgebra, H: Subgroup, K: Subgroup, g: int) -> AlgebraHom:
    """``h -> g h g^-1`` from ``F[H]`` to ``F[K]`` with the right-basis oracle over the image."""
    G = H.parent
    k, p = F.k, F.p
    hs, ks = list(H.elements), list(K.elements)
    posK = {x: i for i, x in enumerate(ks)}
    posH = {x: i for i, x in enumerate(hs)}
    M = np.zeros((B.dim, A.dim), dtype=np.int64)
    for a, h in enumerate(hs):
        t = posK[G.conj(g, h)]
        for i in range(k):
            M[t * k + i, a * k + i] = 1
    image = conjugate_subgroup(g, H)
    zs = left_coset_reps(image, K)
    gi = G.inv(g)
    reps = np.zeros((len(zs), B.dim), dtype=np.int64)
    for j, z in enumerate(zs):
        reps[j, posK[z] * k] = 1

    def express(b):
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros((len(zs), A.dim), dtype=np.int64)
        for t, x in enumerate(ks):
            for j, z in enumerate(zs):
                y = G.mul(G.inv(z), x)
                if y in image:
                    src = posH[G.conj(gi, y)]
                    out[j, src * k : (src + 1) * k] += b[t * k : (t + 1) * k]
                    break
        return out % p

    return AlgebraHom(A, B, M, right_basis=RightBasisOracle(reps, express), label="untwisted")


def dress_kuku_compare(R: GRing, max_order: int = 48) -> ComparisonReport:
    """Compare the twisted K0 Mackey functor with one built from plain group algebras."""
    if not R.is_trivial_action():
        raise MackeyError("the comparison applies to trivial actions only")
    F = R.ring
    if not isinstance(F, FiniteField):
        raise UnsupportedInstanceError("the comparison needs a finite field")
    G = R.group
    algs: dict[Key, StructureAlgebra] = {}

    def alg(H):
        if H.elements not in algs:
            algs[H.elements] = group_algebra(F, H)
        return algs[H.elements]

    twisted = k0_twisted_mackey(R, max_order)
    plain = _algebra_mackey(
        G,
        alg,
        lambda H, K: _group_algebra_hom(F, alg(H), alg(K), H, K, G.identity),
        lambda g, H: _group_algebra_hom(F, alg(H), alg(conjugate_subgroup(g, H)), H, conjugate_subgroup(g, H), g),
        label=f"K0({F.label}[{G.label}])",
        max_order=max_order,
    )
    mism = []
    values_equal = all(twisted.values[k].rank == plain.values[k].rank for k in twisted.values)
    constants_equal = all(np.array_equal(R.algebra(H).algebra.constants, alg(H).constants) for H in twisted.subgroups)
    compared = 0
    for name in ("res", "tr", "conj"):
        A, B = getattr(twisted, name), getattr(plain, name)
        for key in A:
            compared += 1
            if not np.array_equal(A[key].data, B[key].data):
                mism.append(f"{name}{key}")
    return ComparisonReport(f"{R.label}", values_equal, constants_equal, mism, compared)


# -- higher K-groups of finite fields (external data) -----------------------------------------


def quillen_kn_instance(p: int, k: int, n: int, allow_external_data: bool = False) -> MackeyData:
    """``K_n(GF(p^d)) = Z/(p^{d i} - 1)`` for ``n = 2i - 1``, over ``Gal = C_k``.

    The values and maps are taken as given input (they are not derived in
    this package): restriction multiplies by ``(p^{d_H i}-1)/(p^{d_K i}-1)``,
    transfer reduces, and the Frobenius ``x -> x^p`` acts by ``p^i``.  At
    ``i = 1`` the result is compared with :func:`units_galois_mackey` through
    discrete logarithms and any disagreement raises.
    """
    if not allow_external_data:
        raise ExternalDataError("higher K-groups of finite fields are external data; pass allow_external_data=True")
    if n < 1 or n % 2 == 0:
        raise MackeyError("n must be odd and positive")
    i = (n + 1) // 2
    R = galois_gring(p, k)
    G = R.group
    gen = G.element(G.cyclic_generator) if hasattr(G, "cyclic_generator") else 1
    # exponent e(g) with θ_g = Frobenius^e
    expo = {}
    x = G.identity
    for e in range(k):
        expo[x] = e
        x = G.mul(gen, x)

    def d(H):
        return k // H.order

    def mod(H):
        return p ** (d(H) * i) - 1

    def value(H):
        return AbValue.cyclic(mod(H), f"K{n}(GF({p}^{d(H)}))")

    def res(H, K, VK, VH):
        ratio = mod(H) // mod(K)
        return AbMap(VK, VH, (np.arange(VK.order) * ratio) % VH.order)

    def tr(H, K, VH, VK):
        return AbMap(VH, VK, np.arange(VH.order) % VK.order)

    def conj(g, H, VH, VgH):
        return AbMap(VH, VgH, (np.arange(VH.order) * pow(p, i * expo[g], VH.order)) % VgH.order)

    M = build_mackey(G, value, res, tr, conj, label=f"K{n}(GF({p}^{k}))")
    M.flags = ("external-data",)
    if i == 1:
        _units_oracle(M, R)
    return M


def _units_oracle(Q: MackeyData, R: GRing) -> None:
    """Discrete-log identification of ``Q`` with the units instance; raises on any mismatch."""
    U = units_mackey(R)
    F = R.ring
    omega = next(x for x in F.elements() if x and len({F.power(x, e) for e in range(F.size - 1)}) == F.size - 1)
    logs: dict[Key, np.ndarray] = {}
    for H in Q.subgroups:
        els = U.extras["elements"][H.elements]
        order = Q.value(H).order
        base = F.power(omega, (F.size - 1) // order) if order else F.one
        dl = {F.power(base, a): a for a in range(order)}
        logs[H.elements] = np.array([dl[r] for r in els], dtype=np.int64)
    for (h, kk), f in U.res.items():
        if not np.array_equal(logs[h][f.data], Q.res[(h, kk)].data[logs[kk]]):
            raise OracleMismatchError(f"restriction disagrees with the units instance at {h} ⊆ {kk}")
    for (h, kk), f in U.tr.items():
        if not np.array_equal(logs[kk][f.data], Q.tr[(h, kk)].data[logs[h]]):
            raise OracleMismatchError(f"transfer disagrees with the units instance at {h} ⊆ {kk}")
    for (g, h), f in U.conj.items():
        gh = conjugate_subgroup(g, Q.group.subgroup(h)).elements
        if not np.array_equal(logs[gh][f.data], Q.conj[(g, h)].data[logs[h]]):
            raise OracleMismatchError(f"conjugation disagrees with the units instance at g={g}, H={h}")
