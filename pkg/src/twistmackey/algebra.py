"""Finite-dimensional associative algebras over GF(p) given by structure constants.

``constants[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``.  The
semisimple toolkit here (center, Frobenius-fixed subalgebra, primitive
central idempotents, block invariants) is what K0 computations rest on.
Semisimplicity itself is the caller's contract; the perfect-square test in
:func:`block_data` is the tripwire when it is violated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg


class AlgebraError(ValueError):
    pass


class SplittingError(AlgebraError):
    """Idempotent splitting failed; the input is not a semisimple algebra."""


class StructuralError(AlgebraError):
    """A block or module invariant that must be an exact integer was not."""


class StructureAlgebra:
    def __init__(
        self,
        p: int,
        constants: np.ndarray,
        unit: Sequence[int],
        labels: Sequence[str] | None = None,
        check: bool = True,
    ) -> None:
        c = np.asarray(constants, dtype=np.int64) % p
        d = c.shape[0]
        if c.shape != (d, d, d) or d == 0:
            raise AlgebraError(f"structure constants must have shape (d,d,d), got {c.shape}")
        u = np.asarray(unit, dtype=np.int64) % p
        if u.shape != (d,):
            raise AlgebraError("unit must be a coordinate vector of length dim")
        c.setflags(write=False)
        u.setflags(write=False)
        self.p = p
        self.dim = d
        self.constants = c
        self.unit = u
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(d)]
        if check:
            self._check()

    def _check(self) -> None:
        c, p = self.constants, self.p
        lhs = np.tensordot(c, c, axes=([2], [0])) % p  # (b_i b_j) b_l -> [i,j,l,m]
        rhs = np.tensordot(c, c, axes=([2], [1])).transpose(2, 0, 1, 3) % p  # b_i (b_j b_l)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, l, _ = bad[0]
            raise AlgebraError(f"structure constants are not associative at basis triple ({i},{j},{l})")
        eye = np.eye(self.dim, dtype=np.int64)
        if not np.array_equal(self.left_matrix(self.unit), eye) or not np.array_equal(self.right_matrix(self.unit), eye):
            raise AlgebraError("unit is not a two-sided identity")

    def __repr__(self) -> str:
        return f"StructureAlgebra(GF({self.p}), dim={self.dim})"

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def mul(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), self.constants) % self.p

    def power(self, u, e: int) -> np.ndarray:
        out, base = self.unit.copy(), np.asarray(u, dtype=np.int64) % self.p
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def left_matrix(self, u) -> np.ndarray:
        """Matrix of ``v -> u v`` acting on column vectors."""
        return np.einsum("i,ijk->kj", np.asarray(u, dtype=np.int64), self.constants) % self.p

    def right_matrix(self, u) -> np.ndarray:
        """Matrix of ``v -> v u`` acting on column vectors."""
        return np.einsum("j,ijk->ki", np.asarray(u, dtype=np.int64), self.constants) % self.p

    @cached_property
    def left_matrices(self) -> np.ndarray:
        """``left_matrices[i]`` is the left multiplication matrix of ``b_i``."""
        out = self.constants.transpose(0, 2, 1).copy()
        out.setflags(write=False)
        return out

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.constants, self.constants.transpose(1, 0, 2)))

    @cached_property
    def center_basis(self) -> np.ndarray:
        return algebra_center(self)

    @cached_property
    def blocks(self) -> list[Block]:
        return [block_data(self, e) for e in primitive_central_idempotents(self)]


def algebra_center(A: StructureAlgebra) -> np.ndarray:
    """Basis (rows, in ``A`` coordinates) of ``{z : b_i z = z b_i for all i}``."""
    c = A.constants
    # M[(i,k), j] = c[i,j,k] - c[j,i,k]
    M = (c - c.transpose(1, 0, 2)).transpose(0, 2, 1).reshape(A.dim * A.dim, A.dim)
    return linalg.kernel(M, A.p)


def subalgebra(A: StructureAlgebra, basis: np.ndarray, labels: Sequence[str] | None = None) -> StructureAlgebra:
    """The subalgebra spanned by the rows of ``basis`` (must be closed and contain 1)."""
    B = np.asarray(basis, dtype=np.int64) % A.p
    m = B.shape[0]
    prods = np.einsum("ai,bj,ijk->abk", B, B, A.constants) % A.p  # (m, m, dim)
    rhs = np.vstack([prods.reshape(m * m, A.dim), A.unit[None, :]]).T
    res = linalg.rref_solve(B.T, rhs, A.p)
    if not res.consistent:
        raise AlgebraError("basis does not span a unital subalgebra")
    X = res.solution  # (m, m*m + 1)
    consts = X[:, : m * m].T.reshape(m, m, m)
    return StructureAlgebra(A.p, consts, X[:, -1], labels=labels)


def center_subalgebra(A: StructureAlgebra) -> tuple[StructureAlgebra, np.ndarray]:
    """The center as its own algebra, with the embedding basis (rows, ``A`` coordinates)."""
    Zb = A.center_basis
    return subalgebra(A, Zb), Zb


def frobenius_fixed_space(Z: StructureAlgebra) -> np.ndarray:
    """Basis (rows) of ``{z : z^p = z}`` in a commutative algebra (Berlekamp subalgebra)."""
    if not Z.is_commutative():
        raise AlgebraError("frobenius_fixed_space needs a commutative algebra")
    p = Z.p
    cols = [(Z.power(Z.basis_vector(i), p) - Z.basis_vector(i)) % p for i in range(Z.dim)]
    return linalg.kernel(np.array(cols).T, p)


def _minimal_polynomial(Z: StructureAlgebra, u: np.ndarray, unit: np.ndarray) -> list[int]:
    """Monic minimal polynomial (little-endian) of ``u`` in the algebra with identity ``unit``."""
    p = Z.p
    powers = [unit % p]
    while True:
        nxt = Z.mul(powers[-1], u)
        res = linalg.rref_solve(np.array(powers).T, nxt, p)
        if res.consistent:
            return [(-int(c)) % p for c in res.solution] + [1]
        powers.append(nxt)


def _split_center(Z: StructureAlgebra) -> list[np.ndarray]:
    p = Z.p
    F = frobenius_fixed_space(Z)
    idems = [Z.unit.copy()]
    for b in F:
        refined = []
        for e in idems:
            u = Z.mul(e, b)
            poly = _minimal_polynomial(Z, u, e)
            deg = len(poly) - 1
            if deg == 1:
                refined.append(e)
                continue
            roots = [lam for lam in range(p) if sum(c * pow(lam, i, p) for i, c in enumerate(poly)) % p == 0]
            if len(roots) != deg:
                raise SplittingError(
                    f"minimal polynomial {poly} of a Frobenius-fixed element does not split into distinct linear factors"
                )
            for lam in roots:
                proj = e.copy()
                for mu in roots:
                    if mu == lam:
                        continue
                    factor = (u - mu * e) * pow(lam - mu, -1, p) % p
                    proj = Z.mul(proj, factor)
                refined.append(proj)
        idems = refined
    if len(idems) != F.shape[0]:
        raise SplittingError(f"found {len(idems)} idempotents but the Frobenius-fixed space has dimension {F.shape[0]}")
    return idems


def primitive_central_idempotents(A: StructureAlgebra) -> list[np.ndarray]:
    """Primitive central idempotents of a semisimple algebra, sorted lexicographically."""
    Z, emb = center_subalgebra(A)
    idems = [(e @ emb) % A.p for e in _split_center(Z)]
    for i, e in enumerate(idems):
        if not np.array_equal(A.mul(e, e), e):
            raise SplittingError(f"idempotent {i} is not idempotent")
    total = np.sum(idems, axis=0) % A.p
    if not np.array_equal(total, A.unit):
        raise SplittingError("central idempotents do not sum to 1")
    return sorted(idems, key=lambda v: tuple(int(x) for x in v))


@dataclass(frozen=True, eq=False)
class Block:
    idempotent: np.ndarray
    block_dim: int
    center_dim: int
    matrix_size: int

    @property
    def simple_dim(self) -> int:
        """Dimension over GF(p) of the simple module of this block."""
        return self.matrix_size * self.center_dim


def block_data(A: StructureAlgebra, e) -> Block:
    """``(dim eA, dim eZ(A), n, n·d)`` for a primitive central idempotent ``e``."""
    e = np.asarray(e, dtype=np.int64) % A.p
    block_dim = linalg.rank(A.left_matrix(e), A.p)
    Zb = A.center_basis
    ez = np.array([A.mul(e, z) for z in Zb])
    d = linalg.rank(ez, A.p)
    ez_basis = linalg.row_basis(ez, A.p)
    frob = np.array([A.power(z, A.p) for z in ez_basis])
    if linalg.rank(frob, A.p) != d:
        raise StructuralError("block center has nilpotent elements; the algebra is not semisimple")
    if d == 0 or block_dim % d:
        raise StructuralError(f"block dimension {block_dim} is not divisible by center dimension {d}")
    n = math.isqrt(block_dim // d)
    if n * n * d != block_dim:
        raise StructuralError(f"block dimension {block_dim} / center dimension {d} is not a perfect square")
    e.setflags(write=False)
    return Block(e, block_dim, d, n)


class HomError(AlgebraError):
    pass


class RightBasisOracle:
    """``B`` as a free right ``A``-module along ``f``: ``b = Σ_j z_j f(a_j)``.

    ``reps`` holds the ``z_j`` as rows in ``B`` coordinates and ``express``
    maps a ``B`` vector to the ``(m, dim A)`` array of coefficients ``a_j``.
    """

    def __init__(self, reps: np.ndarray, express, labels: Sequence[str] | None = None) -> None:
        self.reps = np.asarray(reps, dtype=np.int64)
        self.express = express
        self.labels = list(labels) if labels is not None else [f"z{j}" for j in range(len(self.reps))]

    @property
    def rank(self) -> int:
        return len(self.reps)


class AlgebraHom:
    """Unital algebra map given by a matrix acting on column coordinate vectors."""

    def __init__(
        self,
        source: StructureAlgebra,
        target: StructureAlgebra,
        matrix: np.ndarray,
        right_basis: RightBasisOracle | None = None,
        label: str = "f",
        check: bool = True,
    ) -> None:
        if source.p != target.p:
            raise HomError("source and target live over different prime fields")
        M = np.asarray(matrix, dtype=np.int64) % source.p
        if M.shape != (target.dim, source.dim):
            raise HomError(f"matrix shape {M.shape} does not match ({target.dim}, {source.dim})")
        M.setflags(write=False)
        self.source, self.target, self.matrix, self.label = source, target, M, label
        self.right_basis = right_basis
        if check:
            self._check()

    def _check(self) -> None:
        p = self.source.p
        M = self.matrix
        if not np.array_equal(M @ self.source.unit % p, self.target.unit):
            raise HomError(f"{self.label} is not unital")
        lhs = np.einsum("ijk,lk->ijl", self.source.constants, M) % p
        rhs = np.einsum("li,mj,lmn->ijn", M, M, self.target.constants) % p
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, _ = bad[0]
            raise HomError(f"{self.label} is not multiplicative on basis pair ({i},{j})")
        if self.right_basis is not None:
            self._check_right_basis()

    def _check_right_basis(self) -> None:
        """Reassembly ``Σ_j z_j f(a_j) = b`` on every basis vector of the target."""
        B, p = self.target, self.target.p
        rb = self.right_basis
        for i in range(B.dim):
            b = B.basis_vector(i)
            coeffs = np.asarray(rb.express(b), dtype=np.int64)
            total = B.zero()
            for z, a in zip(rb.reps, coeffs):
                total = (total + B.mul(z, self.matrix @ a % p)) % p
            if not np.array_equal(total, b):
                raise HomError(f"right-basis oracle of {self.label} does not reassemble basis vector {i}")

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=np.int64) % self.source.p

    def compose(self, first: AlgebraHom) -> AlgebraHom:
        """``self ∘ first`` (the right-basis oracle is dropped)."""
        if first.target is not self.source:
            raise HomError("composition of non-composable algebra maps")
        return AlgebraHom(first.source, self.target, self.matrix @ first.matrix, label=f"{self.label}∘{first.label}", check=False)


def identity_hom(A: StructureAlgebra) -> AlgebraHom:
    eye = np.eye(A.dim, dtype=np.int64)
    oracle = RightBasisOracle(A.unit[None, :], lambda b: np.asarray(b, dtype=np.int64)[None, :] % A.p, ["1"])
    return AlgebraHom(A, A, eye, right_basis=oracle, label="id")
