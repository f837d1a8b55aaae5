"""Modules over structure algebras, change of scalars, K0 classes.

Every module is a left module with an explicit GF(p) carrier: ``action[i]``
is the ``n x n`` matrix of basis element ``b_i``.  Semisimplicity of the
algebras in play lets K0 classes be read off from ranks of idempotent
actions, and induced K0 maps be computed from the isotypic ideals
``A e_c``, which are ``n_c`` copies of the simple module of block ``c``.

K0 maps are integer matrices acting on column vectors of multiplicities,
rows indexed by target blocks and columns by source blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import AlgebraHom, Block, StructuralError, StructureAlgebra
from .groups import (
    Subgroup,
    conjugate_subgroup,
    intersect,
    left_coset_reps,
    refined_transversal,
    upper_conjugate,
)
from .twisted import GRing, TGRElement


class ModuleError(ValueError):
    pass


class UnsupportedExtensionError(ModuleError):
    pass


class AlgebraModule:
    def __init__(self, algebra: StructureAlgebra, action: np.ndarray, label: str = "M", check: bool = True) -> None:
        act = np.asarray(action, dtype=np.int64) % algebra.p
        if act.ndim != 3 or act.shape[0] != algebra.dim or act.shape[1] != act.shape[2]:
            raise ModuleError(f"action must have shape ({algebra.dim}, n, n), got {act.shape}")
        act.setflags(write=False)
        self.algebra, self.action, self.label = algebra, act, label
        self.dim = act.shape[1]
        if check:
            self._check()

    def _check(self) -> None:
        A, p, act = self.algebra, self.algebra.p, self.action
        if self.dim == 0:
            return
        if not np.array_equal(self.act(A.unit), np.eye(self.dim, dtype=np.int64)):
            raise ModuleError(f"{self.label}: the unit does not act as the identity")
        lhs = np.einsum("iab,jbc->ijac", act, act) % p
        rhs = np.einsum("ijk,kac->ijac", A.constants, act) % p
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j = bad[0][:2]
            raise ModuleError(f"{self.label}: action is not multiplicative on basis pair ({i},{j})")

    def act(self, u) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(u, dtype=np.int64), self.action) % self.algebra.p

    def __repr__(self) -> str:
        return f"AlgebraModule({self.label}, dim={self.dim})"


def regular_module(A: StructureAlgebra) -> AlgebraModule:
    return AlgebraModule(A, A.left_matrices, label="regular", check=False)


def zero_module(A: StructureAlgebra) -> AlgebraModule:
    return AlgebraModule(A, np.zeros((A.dim, 0, 0), dtype=np.int64), label="0", check=False)


def direct_sum(*mods: AlgebraModule) -> AlgebraModule:
    A = mods[0].algebra
    if any(M.algebra is not A for M in mods):
        raise ModuleError("direct sum of modules over different algebras")
    n = sum(M.dim for M in mods)
    act = np.zeros((A.dim, n, n), dtype=np.int64)
    off = 0
    for M in mods:
        act[:, off : off + M.dim, off : off + M.dim] = M.action
        off += M.dim
    return AlgebraModule(A, act, label=" ⊕ ".join(M.label for M in mods), check=False)


def submodule(M: AlgebraModule, basis: np.ndarray, label: str = "N") -> AlgebraModule:
    """Submodule spanned by the rows of ``basis`` (must be invariant), in those coordinates."""
    p = M.algebra.p
    B = linalg.row_basis(basis, p)
    if B.shape[0] == 0:
        return zero_module(M.algebra)
    images = np.einsum("iab,lb->ila", M.action, B) % p  # (dim A, r, n)
    rhs = images.reshape(-1, M.dim).T
    res = linalg.rref_solve(B.T, rhs, p)
    if not res.consistent:
        raise ModuleError("span is not a submodule")
    r = B.shape[0]
    coords = res.solution.T.reshape(M.algebra.dim, r, r)  # [i, l, l'] = coeff of row l' in b_i·row_l
    return AlgebraModule(M.algebra, coords.transpose(0, 2, 1), label=label)


def ideal_module(A: StructureAlgebra, e) -> AlgebraModule:
    """The left ideal ``A e`` as a module."""
    R = A.right_matrix(e)  # columns b_i e
    return submodule(regular_module(A), R.T, label="A·e")


def restrict_scalars(f: AlgebraHom, M: AlgebraModule) -> AlgebraModule:
    if M.algebra is not f.target:
        raise ModuleError("module is not over the target of the map")
    act = np.einsum("ki,kab->iab", f.matrix, M.action) % f.source.p
    return AlgebraModule(f.source, act, label=f"Res({M.label})", check=False)


def extend_scalars(f: AlgebraHom, M: AlgebraModule) -> AlgebraModule:
    """``B ⊗_A M`` on the carrier ``⊕_j z_j ⊗ M`` given by the right-basis oracle of ``f``."""
    if M.algebra is not f.source:
        raise ModuleError("module is not over the source of the map")
    rb = f.right_basis
    if rb is None:
        raise UnsupportedExtensionError(f"no right-basis oracle for {f.label}")
    B, p, m, n = f.target, f.target.p, rb.rank, M.dim
    # E[i, j, j', k]: coefficient a_{j'} (A coords) of b_i z_j
    E = np.array([[rb.express(B.mul(B.basis_vector(i), z)) for z in rb.reps] for i in range(B.dim)], dtype=np.int64)
    blocks = np.einsum("ijtk,kab->itajb", E, M.action) % p  # row block t, column block j
    return AlgebraModule(B, blocks.reshape(B.dim, m * n, m * n), label=f"Ind({M.label})", check=False)


def restrict_morphism(f: AlgebraHom, phi: np.ndarray) -> np.ndarray:
    return np.asarray(phi, dtype=np.int64)


def extend_morphism(f: AlgebraHom, phi: np.ndarray) -> np.ndarray:
    """``id_B ⊗ φ`` on the carrier of :func:`extend_scalars`."""
    return np.kron(np.eye(f.right_basis.rank, dtype=np.int64), np.asarray(phi, dtype=np.int64)) % f.source.p


# -- K0 -----------------------------------------------------------------------------


@dataclass(frozen=True)
class K0Class:
    blocks: tuple[tuple[int, ...], ...]
    multiplicities: tuple[int, ...]

    def __add__(self, other: K0Class) -> K0Class:
        if self.blocks != other.blocks:
            raise ModuleError("K0 classes over different block bases")
        return K0Class(self.blocks, tuple(a + b for a, b in zip(self.multiplicities, other.multiplicities)))

    def vector(self) -> np.ndarray:
        return np.array(self.multiplicities, dtype=np.int64)


def _block_key(blocks: list[Block]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in b.idempotent) for b in blocks)


def k0_class(M: AlgebraModule) -> K0Class:
    A, p = M.algebra, M.algebra.p
    blocks = A.blocks
    mult = []
    for c, b in enumerate(blocks):
        r = linalg.rank(M.act(b.idempotent), p) if M.dim else 0
        if r % b.simple_dim:
            raise StructuralError(f"dim e_{c}M = {r} is not a multiple of the simple dimension {b.simple_dim}")
        mult.append(r // b.simple_dim)
    return K0Class(_block_key(blocks), tuple(mult))


def k0_induced_map(f: AlgebraHom, kind: str) -> np.ndarray:
    """Integer matrix of ``K0(f_!)`` (``kind="extend"``) or ``K0(f^*)`` (``kind="restrict"``)."""
    if kind == "extend":
        src, functor = f.source, lambda M: extend_scalars(f, M)
    elif kind == "restrict":
        src, functor = f.target, lambda M: restrict_scalars(f, M)
    else:
        raise ValueError(f"kind must be 'extend' or 'restrict', got {kind!r}")
    cols = []
    for c, b in enumerate(src.blocks):
        v = k0_class(functor(ideal_module(src, b.idempotent))).vector()
        if (v % b.matrix_size).any():
            raise StructuralError(f"image of isotypic ideal {c} is not divisible by n_c = {b.matrix_size}")
        cols.append(v // b.matrix_size)
    tgt = f.target if kind == "extend" else f.source
    return np.array(cols, dtype=np.int64).T.reshape(len(tgt.blocks), len(src.blocks))


def k0_extension_by_ideal(f: AlgebraHom) -> np.ndarray:
    """Extension K0 map computed as ``B ⊗_A A e_c ≅ B f(e_c)`` (independent of the oracle)."""
    cols = []
    for b in f.source.blocks:
        v = k0_class(ideal_module(f.target, f(b.idempotent))).vector()
        cols.append(v // b.matrix_size)
    return np.array(cols, dtype=np.int64).T.reshape(len(f.target.blocks), len(f.source.blocks))


# -- the Mackey decomposition isomorphism ---------------------------------------------


@dataclass
class DecompositionReport:
    J: Subgroup
    K: Subgroup
    H: Subgroup
    reps: list[int]
    betas: list[list[int]]
    p_basis_labels: list[str]
    q_basis_labels: list[str]
    dim_p: int
    dim_q: int
    left_iso: bool = False
    invertible: bool = False
    right_matrix_check: bool = False
    elementwise_pairs: int = 0
    elementwise_failure: str | None = None
    q_basis_free: bool = False
    k0_p: tuple[int, ...] = ()
    k0_q: tuple[int, ...] = ()
    failures: list[str] = field(default_factory=list)
    epsilon: np.ndarray | None = None
    p_module: AlgebraModule | None = None
    q_module: AlgebraModule | None = None
    p_right: np.ndarray | None = None  # right multiplication by each basis element of R_θ[K]
    q_right: np.ndarray | None = None

    @property
    def k0_agree(self) -> bool:
        return self.k0_p == self.k0_q

    @property
    def passed(self) -> bool:
        return (
            self.left_iso
            and self.invertible
            and self.right_matrix_check
            and self.elementwise_failure is None
            and self.q_basis_free
            and self.k0_agree
        )


def _pieces(R: GRing, J: Subgroup, K: Subgroup, x: int):
    """Functors building ``Tr^J_{J∩xK} γ^x_! Res^K_{J^x∩K}`` for one double coset rep."""
    G = R.group
    L = intersect(upper_conjugate(J, x), K)  # J^x ∩ K
    Lx = conjugate_subgroup(x, L)  # J ∩ xKx^-1
    res = R.algebra_hom(L, G.identity, K)
    gam = R.algebra_hom(L, G.inv(x), Lx)
    tr = R.algebra_hom(Lx, G.identity, J)
    return L, Lx, res, gam, tr


def mackey_decomposition_witness(R: GRing, J: Subgroup, K: Subgroup, H: Subgroup) -> DecompositionReport:
    """Build ``ε = ⊕ sh_{x_i}: P -> Q`` and verify it is a bimodule isomorphism."""
    G = R.group
    e = G.identity
    lab = G.element_labels
    trans = refined_transversal(J, K, H)
    AK, AH, AJ = R.algebra(K), R.algebra(H), R.algebra(J)
    TH = AH.tgr
    F, p = AH.field, AH.field.p
    n = AK.dim
    regK = regular_module(AK.algebra)

    # Q = Res_J^H Tr_K^H (R_θ[K])
    trKH = R.algebra_hom(K, e, H)
    resJH = R.algebra_hom(J, e, H)
    Q = restrict_scalars(resJH, extend_scalars(trKH, regK))
    z_reps = left_coset_reps(K, H)

    # P = ⊕_i Tr γ_! Res (R_θ[K]), tracking each piece's functors
    pieces, P_mods = [], []
    for x, _ in trans:
        L, Lx, res, gam, tr = _pieces(R, J, K, x)
        Pi = extend_scalars(tr, extend_scalars(gam, restrict_scalars(res, regK)))
        pieces.append((x, L, Lx, res, gam, tr))
        P_mods.append(Pi)
    P = direct_sum(*P_mods)

    p_labels = [f"{lab[x]}·{lab[b]}·{lab[G.inv(x)]}" for x, bs in trans for b in bs]
    q_labels = [f"{lab[x]}·{lab[b]}" for x, bs in trans for b in bs]
    rep = DecompositionReport(J, K, H, [x for x, _ in trans], [bs for _, bs in trans], p_labels, q_labels, P.dim, Q.dim)

    # ε on carrier bases: P_i vector (j, l) is w_j · x · b_l · x^-1 in R_θ[H]; ε shifts by x
    cols = []
    for x, L, Lx, res, gam, tr in pieces:
        w_reps = left_coset_reps(Lx, J)
        for w in w_reps:
            for l in range(n):
                b_l = AK.from_vector(AK.algebra.basis_vector(l))
                u = TH.pure(F.one, w) * TH.pure(F.one, x) * TGRElement.build(TH, b_l.terms)
                coeffs = _right_express(R, K, H, z_reps, u)
                cols.append(np.concatenate([AK.to_vector(c) for c in coeffs]))
    E = np.array(cols, dtype=np.int64).T % p
    rep.epsilon = E
    if E.shape != (Q.dim, P.dim):
        rep.failures.append(f"ε has shape {E.shape}, expected ({Q.dim}, {P.dim})")
        return rep
    rep.invertible = Q.dim == P.dim and linalg.rank(E, p) == P.dim
    rep.p_module, rep.q_module = P, Q
    bad = intertwining_failures(E, P, Q)
    rep.left_iso = not bad
    if bad:
        rep.failures.append(f"ε does not commute with the action of {AJ.algebra.labels[bad[0]]}")

    # (b) right R_θ[K]-multiplication transported through the functors
    P_oms, Q_oms = [], []
    for i in range(AK.dim):
        omega = AK.algebra.right_matrix(AK.algebra.basis_vector(i))
        parts = [extend_morphism(tr, extend_morphism(gam, restrict_morphism(res, omega))) for x, L, Lx, res, gam, tr in pieces]
        P_oms.append(_block_diag(parts))
        Q_oms.append(restrict_morphism(resJH, extend_morphism(trKH, omega)))
    rep.p_right, rep.q_right = np.array(P_oms), np.array(Q_oms)
    bad_r = right_failures(E, rep.p_right, rep.q_right, p)
    rep.right_matrix_check = not bad_r
    if bad_r:
        rep.failures.append(f"ε does not commute with right multiplication by {AK.algebra.labels[bad_r[0]]}")
    rep.elementwise_pairs, rep.elementwise_failure = _elementwise_check(R, J, K, trans)

    # Q is free over R_θ[J] on {x_i β_{i,l}}
    flat = [G.mul(x, b) for x, bs in trans for b in bs]
    cover = sorted(G.mul(j, y) for y in flat for j in J.elements)
    rep.q_basis_free = cover == list(H.elements)
    if not rep.q_basis_free:
        rep.failures.append("{x_i β_il} is not a right transversal of J in H")

    rep.k0_p = k0_class(P).multiplicities
    rep.k0_q = k0_class(Q).multiplicities
    if not rep.k0_agree:
        rep.failures.append(f"K0 classes differ: {rep.k0_p} vs {rep.k0_q}")
    return rep


def intertwining_failures(E: np.ndarray, P: AlgebraModule, Q: AlgebraModule) -> list[int]:
    """Basis indices ``i`` with ``E·P(a_i) ≠ Q(a_i)·E``."""
    p = P.algebra.p
    left = np.einsum("ab,ibc->iac", E, P.action) % p
    right = np.einsum("iab,bc->iac", Q.action, E) % p
    return [int(i) for i in np.flatnonzero((left != right).any(axis=(1, 2)))]


def right_failures(E: np.ndarray, P_right: np.ndarray, Q_right: np.ndarray, p: int) -> list[int]:
    """Basis indices ``i`` of ``R_θ[K]`` with ``E·P(ω_i) ≠ Q(ω_i)·E``."""
    left = np.einsum("ab,ibc->iac", E, P_right) % p
    right = np.einsum("iab,bc->iac", Q_right, E) % p
    return [int(i) for i in np.flatnonzero((left != right).any(axis=(1, 2)))]


def _right_express(R: GRing, K: Subgroup, H: Subgroup, z_reps: list[int], u: TGRElement) -> list[TGRElement]:
    from .twisted import RightBasis

    return RightBasis(R.twisted(K), R.twisted(H), tuple(z_reps)).express(u)


def _block_diag(mats: list[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.int64)
    off = 0
    for m in mats:
        out[off : off + m.shape[0], off : off + m.shape[0]] = m
        off += m.shape[0]
    return out


def _elementwise_check(R: GRing, J: Subgroup, K: Subgroup, trans) -> tuple[int, str | None]:
    """The square ``(g·γ^x(b))·x = (g·x)·b`` for every pure generator ``g = r j x β x^-1`` and pure ``b = r' k``.

    Both paths are evaluated with the pure product law ``(r g)(r' g') = (r θ_g(r'), g g')``.
    """
    G, Rg, th = R.group, R.ring, R.theta
    mul, tab = Rg.mul_table, G.table
    rs = np.array([r for r in Rg.elements() if r != Rg.zero])
    Ks = np.array(K.elements)
    pairs = 0
    for x, betas in trans:
        xi = G.inv(x)
        gens = np.array([G.prod(j, x, b, xi) for j in J.elements for b in betas])
        # broadcast axes: (r, g, r', k)
        r = rs[:, None, None, None]
        g = gens[None, :, None, None]
        r2 = rs[None, None, :, None]
        k = Ks[None, None, None, :]
        # top: γ^x(r'k) = θ_x(r')·xkx^-1, multiply, then shift by x
        gk_r = th[x][r2]
        gk_g = tab[tab[x, k], xi]
        t_r = mul[r, th[g, gk_r]]
        t_g = tab[tab[g, gk_g], x]
        # bottom: (r g)·(1 x) then times r'k
        s_r = mul[r, th[g, Rg.one]]
        s_g = tab[g, x]
        b_r = mul[s_r, th[s_g, r2]]
        b_g = tab[s_g, k]
        t_r, t_g, b_r, b_g = np.broadcast_arrays(t_r, t_g, b_r, b_g)
        pairs += t_r.size
        bad = np.argwhere((t_r != b_r) | (t_g != b_g))
        if len(bad):
            a, gi, c, ki = bad[0]
            return pairs, (
                f"generator {Rg.element_labels[rs[a]]}·{G.element_labels[gens[gi]]}, "
                f"multiplier {Rg.element_labels[rs[c]]}·{G.element_labels[Ks[ki]]}"
            )
    return pairs, None
