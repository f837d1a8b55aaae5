"""Semilinear group actions and modules over twisted group rings.

A free ``R``-module ``M = R^n`` with an action ``f(h)(v) = A_h θ_h(v)`` is
the same data as an ``R_θ[H]``-module: ``r h`` acts by ``m -> r f(h)(m)``.
The translation is done on GF(p) carriers so the result plugs into
:mod:`twistmackey.modules`.  Coordinates: component ``j``, power-basis digit
``i`` sits at index ``j·k + i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from . import linalg
from .fields import FiniteField
from .groups import Subgroup
from .modules import AlgebraModule
from .twisted import GRing, TwistedAlgebra, UnsupportedBaseError


class SemilinearError(ValueError):
    """Carries the witness ``(h, r, m)`` of the failed identity."""

    def __init__(self, message: str, witness: tuple | None = None) -> None:
        super().__init__(message)
        self.witness = witness


def _field(R: GRing) -> FiniteField:
    if not isinstance(R.ring, FiniteField):
        raise UnsupportedBaseError("semilinear modules are handled over finite field bases")
    return R.ring


def _mat_vec(F: FiniteField, A: np.ndarray, v: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in A:
        acc = F.zero
        for a, x in zip(row, v):
            acc = F.add(acc, F.mul(int(a), int(x)))
        out.append(acc)
    return tuple(out)


def _mat_mul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.array([_mat_vec(F, A, col) for col in B.T], dtype=np.int64).T


@dataclass(frozen=True, eq=False)
class SemilinearModule:
    """``R^n`` with ``f(h)(v) = matrices[h] · θ_h(v)`` for ``h`` in ``subgroup``."""

    gring: GRing
    subgroup: Subgroup
    rank: int
    matrices: Mapping[int, np.ndarray]

    def __post_init__(self) -> None:
        F, G, th = _field(self.gring), self.gring.group, self.gring.theta
        n = self.rank
        if set(self.matrices) != set(self.subgroup.elements):
            raise SemilinearError("one matrix per subgroup element is required")
        eye = np.eye(n, dtype=np.int64)
        if not np.array_equal(self.matrices[G.identity], eye):
            raise SemilinearError("f(e) is not the identity", (G.identity, F.one, None))
        for g in self.subgroup.elements:
            for h in self.subgroup.elements:
                lhs = self.matrices[G.mul(g, h)]
                rhs = _mat_mul(F, self.matrices[g], th[g][self.matrices[h]])
                if not np.array_equal(lhs, rhs):
                    j = int(np.flatnonzero((lhs != rhs).any(axis=0))[0])
                    raise SemilinearError(
                        f"cocycle condition f(gh) = f(g)f(h) fails at g={G.element_labels[g]}, h={G.element_labels[h]}",
                        (G.mul(g, h), F.one, tuple(int(x) for x in eye[j])),
                    )

    def apply(self, h: int, v: Sequence[int]) -> tuple[int, ...]:
        th = self.gring.theta[h]
        return _mat_vec(self.gring.ring, self.matrices[h], [int(th[x]) for x in v])

    def same_as(self, other: SemilinearModule) -> bool:
        return (
            self.rank == other.rank
            and self.subgroup == other.subgroup
            and all(np.array_equal(self.matrices[h], other.matrices[h]) for h in self.subgroup.elements)
        )


def semilinear_from_maps(
    R: GRing, H: Subgroup, rank: int, maps: Mapping[int, Callable[[tuple[int, ...]], Sequence[int]]]
) -> SemilinearModule:
    """Check arbitrary maps ``f(h)`` on all of ``R^rank`` and record them as matrices.

    Failures raise :class:`SemilinearError` with a witness ``(h, r, m)``.
    """
    F, th = _field(R), R.theta
    q = F.size
    vectors = [tuple(int(d) for d in np.unravel_index(i, (q,) * rank)) for i in range(q**rank)] if rank else [()]
    mats = {}
    for h in H.elements:
        fh = maps[h]
        cols = [tuple(int(x) for x in fh(tuple(int(i == j) for i in range(rank)))) for j in range(rank)]
        A = np.array(cols, dtype=np.int64).T.reshape(rank, rank)
        for m in vectors:
            got = tuple(int(x) for x in fh(m))
            want = _mat_vec(F, A, [int(th[h][x]) for x in m])
            if got == want:
                continue
            for r in F.elements():
                rm = tuple(F.mul(r, x) for x in m)
                lhs = tuple(int(x) for x in fh(rm))
                rhs = tuple(F.mul(int(th[h][r]), x) for x in got)
                if lhs != rhs:
                    raise SemilinearError(f"f({R.group.element_labels[h]}) is not θ-semilinear", (h, r, m))
            raise SemilinearError(f"f({R.group.element_labels[h]}) is not additive", (h, F.one, m))
        mats[h] = A
    return SemilinearModule(R, H, rank, mats)


def to_twisted_module(S: SemilinearModule) -> tuple[TwistedAlgebra, AlgebraModule]:
    """The ``R_θ[H]``-module where ``a^i h`` acts by ``m -> a^i f(h)(m)``."""
    R = S.gring
    F = _field(R)
    TA = R.algebra(S.subgroup)
    k, n, p = F.k, S.rank, F.p
    act = np.zeros((TA.dim, n * k, n * k), dtype=np.int64)
    for a, h in enumerate(S.subgroup.elements):
        for i in range(k):
            for j in range(n):
                for i2 in range(k):
                    v = [F.zero] * n
                    v[j] = p**i2
                    img = S.apply(h, v)
                    img = [F.mul(p**i, x) for x in img]
                    col = np.concatenate([F.to_vector(x) for x in img]) if n else np.zeros(0, dtype=np.int64)
                    act[a * k + i, :, j * k + i2] = col
    return TA, AlgebraModule(TA.algebra, act, label="twisted(M)")


def from_twisted_module(R: GRing, H: Subgroup, M: AlgebraModule) -> tuple[SemilinearModule, np.ndarray]:
    """Recover ``(R^n, f)`` with ``f(h)`` = action of ``1 h``; also return the basis change ``P``.

    ``P`` maps ``R^n`` coordinates (GF(p) layout) to the carrier of ``M``.
    """
    F = _field(R)
    TA = R.algebra(H)
    if M.algebra is not TA.algebra:
        raise SemilinearError("module is not over R_θ[H]")
    k, p = F.k, F.p
    if M.dim % k:
        raise SemilinearError(f"carrier dimension {M.dim} is not a multiple of [R:GF(p)] = {k}")
    e_pos = int(TA.tgr.positions[R.group.identity])
    scal = [M.action[e_pos * k + i] for i in range(k)]  # action of a^i
    chosen: list[np.ndarray] = []
    span = np.zeros((0, M.dim), dtype=np.int64)
    for s in range(M.dim):
        t = np.zeros(M.dim, dtype=np.int64)
        t[s] = 1
        if span.shape[0] and linalg.rank(np.vstack([span, t]), p) == span.shape[0]:
            continue
        chosen.append(t)
        span = linalg.row_basis(np.vstack([span] + [S @ t % p for S in scal]), p)
        if span.shape[0] == M.dim:
            break
    n = len(chosen)
    if n * k != M.dim:
        raise SemilinearError("the carrier is not free over R")  # pragma: no cover - vector spaces are free
    P = np.array([scal[i] @ t % p for t in chosen for i in range(k)], dtype=np.int64).T
    Pinv = linalg.inverse(P, p)
    mats = {}
    for a, h in enumerate(H.elements):
        Ah = np.zeros((n, n), dtype=np.int64)
        act_h = M.action[a * k]
        for j, t in enumerate(chosen):
            coords = Pinv @ (act_h @ t % p) % p
            for jj in range(n):
                Ah[jj, j] = F.from_vector(coords[jj * k : (jj + 1) * k])
        mats[h] = Ah
    return SemilinearModule(R, H, n, mats), P


def descent_module(R: GRing, H: Subgroup) -> SemilinearModule:
    """``M = R`` with ``f(h) = θ_h``."""
    return SemilinearModule(R, H, 1, {h: np.eye(1, dtype=np.int64) for h in H.elements})


@dataclass(frozen=True, eq=False)
class RoundTrip:
    source: SemilinearModule
    algebra: TwistedAlgebra
    module: AlgebraModule
    recovered: SemilinearModule
    basis_change: np.ndarray

    @property
    def identity(self) -> bool:
        return self.recovered.same_as(self.source)


def semilinear_roundtrip(S: SemilinearModule) -> RoundTrip:
    """Forward to an ``R_θ[H]``-module and back again."""
    TA, M = to_twisted_module(S)
    back, P = from_twisted_module(S.gring, S.subgroup, M)
    return RoundTrip(S, TA, M, back, P)
