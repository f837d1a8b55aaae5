"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` or through pytest;
the lines are repeated in pytest's terminal summary.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from twistmackey import linalg
from twistmackey.burnside import (
    BurnsideElement,
    burnside_hom_basis,
    burnside_product,
    burnside_ring_basis,
    cosets,
    transitive_span_basis,
)
from twistmackey.fields import FiniteField
from twistmackey.groups import (
    build_group,
    double_coset_reps,
    enumerate_subgroups,
    intersect,
    upper_conjugate,
)
from twistmackey.mackey import (
    burnside_mackey,
    check_axioms,
    constant_functor,
    dress_kuku_compare,
    endomorphism_mackey,
    k0_twisted_mackey,
    units_galois_mackey,
)
from twistmackey.modules import AlgebraModule, mackey_decomposition_witness
from twistmackey.semilinear import SemilinearModule, from_twisted_module, to_twisted_module
from twistmackey.twisted import GRing, auslander_map, galois_gring, left_basis_decompose

RESULTS: list[str] = []

_cache: dict = {}


def _gring(name: str) -> GRing:
    if name not in _cache:
        _cache[name] = {
            "GF(7)/S3": lambda: GRing.trivial(FiniteField(7), build_group("symmetric(3)")),
            "GF(2^6)/C6": lambda: galois_gring(2, 6),
        }[name]()
    return _cache[name]


def _triples(G):
    subs = enumerate_subgroups(G)
    return [(J, K, H) for H in subs for J in subs for K in subs if J.issubset(H) and K.issubset(H)]


# -- criteria -------------------------------------------------------------------------------------


def criterion_1() -> tuple[bool, str]:
    total, failures = 0, 0
    for spec in ("symmetric(3)", "dihedral(4)", "cyclic(6)", "product(cyclic(2),cyclic(2))"):
        for J, K, H in _triples(build_group(spec)):
            for prefer in ("smallest", "largest"):
                reps = double_coset_reps(J, K, H, prefer=prefer)
                rhs = sum(K.order // intersect(upper_conjugate(J, x), K).order for x, _ in reps)
                total += 1
                failures += H.order // J.order != rhs
    return total >= 200 and failures == 0, f"{total} instances, {failures} failures"


def criterion_2() -> tuple[bool, str]:
    total, failures = 0, 0
    for name in ("GF(7)/S3", "GF(2^6)/C6"):
        R = _gring(name)
        subs = enumerate_subgroups(R.group)
        for H in subs:
            for K in subs:
                if not H.issubset(K):
                    continue
                lb = left_basis_decompose(R, H, K)
                for u in R.twisted(K).pure_elements():
                    total += 1
                    failures += lb.forward(lb.express(u)) != u
    return failures == 0, f"{total} pure elements, {failures} failures"


def criterion_3() -> tuple[bool, str]:
    total, failures, pairs = 0, [], 0
    for name in ("GF(7)/S3", "GF(2^6)/C6"):
        R = _gring(name)
        for J, K, H in _triples(R.group):
            rep = mackey_decomposition_witness(R, J, K, H)
            total += 1
            pairs += rep.elementwise_pairs
            if not rep.passed:
                failures.append(f"{name} J={J.label()} K={K.label()} H={H.label()}: {rep.failures}")
    detail = f"{total} triples, {pairs} (generator, multiplier) pairs, {len(failures)} failures"
    return not failures, detail + (f"; first: {failures[0]}" if failures else "")


def criterion_4() -> tuple[bool, str]:
    out = []
    ok = True
    for p, k in ((3, 2), (2, 3), (5, 2), (2, 6)):
        R = galois_gring(p, k)
        a = auslander_map(R, R.group.whole)
        blocks = len(R.algebra().algebra.blocks)
        good = a.is_isomorphism and blocks == 1
        ok &= good
        out.append(f"({p},{k}): {a.verdict}, rank {a.image_rank}/{a.domain_dim}, {blocks} block")
    return ok, "; ".join(out)


def criterion_5() -> tuple[bool, str]:
    suites = [
        ("burnside(S3)", lambda: burnside_mackey(build_group("symmetric(3)"))),
        ("k0 GF(5)/S3", lambda: k0_twisted_mackey(GRing.trivial(FiniteField(5), build_group("symmetric(3)")))),
        ("k0 GF(9)/C2", lambda: k0_twisted_mackey(galois_gring(3, 2))),
        ("k0 GF(2^6)/C6", lambda: k0_twisted_mackey(galois_gring(2, 6))),
        ("units(3,2)", lambda: units_galois_mackey(3, 2)),
        ("units(2,6)", lambda: units_galois_mackey(2, 6)),
        ("End GF(9)/C2", lambda: endomorphism_mackey(galois_gring(3, 2))),
    ]
    ok, parts = True, []
    for name, make in suites:
        M = make()
        extra = ""
        if hasattr(M, "mackey"):
            extra = "" if M.squares_commute else " squares fail"
            ok &= M.squares_commute
            M = M.mackey
        r = check_axioms(M)
        good = r.passed and r.transversals_agree
        ok &= good
        parts.append(f"{name}: {'ok' if good else 'failing ' + ','.join(r.failing())}{extra}")
    return ok, "; ".join(parts)


def criterion_6() -> tuple[bool, str]:
    ok, parts = True, []
    for p, spec in ((5, "cyclic(2)"), (7, "symmetric(3)")):
        rep = dress_kuku_compare(GRing.trivial(FiniteField(p), build_group(spec)))
        ok &= rep.identical
        parts.append(f"GF({p})/{spec}: {rep.compared} maps, {len(rep.mismatches)} mismatches")
    return ok, "; ".join(parts)


def criterion_7() -> tuple[bool, str]:
    ok, parts = True, []
    for spec in ("symmetric(3)", "dihedral(4)", "cyclic(6)"):
        r = check_axioms(constant_functor(build_group(spec)))
        ok &= r.failing() == ["MF6"]
        parts.append(f"{spec}: flagged {r.failing()}")
    return ok, "; ".join(parts)


def _hilbert90_module(R: GRing, seed: int) -> SemilinearModule:
    """Rank-one module f(g) = c_g·θ_g with c_g = θ_g(b)/b for a unit b outside the fixed field."""
    F, G = R.ring, R.group
    rng = np.random.default_rng(seed)
    fixed = set(np.flatnonzero((R.theta == np.arange(F.size)).all(axis=0)).tolist())
    b = int(rng.choice([x for x in range(1, F.size) if x not in fixed]))
    binv = F.inv(b)
    mats = {g: np.array([[F.mul(int(R.theta[g, b]), binv)]], dtype=np.int64) for g in G.elements()}
    return SemilinearModule(R, G.whole, 1, mats)


def _descent(R: GRing, rank: int) -> SemilinearModule:
    return SemilinearModule(R, R.group.whole, rank, {g: np.eye(rank, dtype=np.int64) for g in R.group.elements()})


def _block_sum(a: SemilinearModule, b: SemilinearModule) -> SemilinearModule:
    n = a.rank + b.rank
    mats = {}
    for g in a.subgroup.elements:
        M = np.zeros((n, n), dtype=np.int64)
        M[: a.rank, : a.rank] = a.matrices[g]
        M[a.rank :, a.rank :] = b.matrices[g]
        mats[g] = M
    return SemilinearModule(a.gring, a.subgroup, n, mats)


def _random_basis(M: AlgebraModule, seed: int) -> AlgebraModule:
    rng = np.random.default_rng(seed)
    p = M.algebra.p
    while True:
        P = rng.integers(0, p, size=(M.dim, M.dim))
        if linalg.rank(P, p) == M.dim:
            break
    return AlgebraModule(M.algebra, np.einsum("ab,ibc,cd->iad", linalg.inverse(P, p), M.action, P) % p)


def criterion_8() -> tuple[bool, str]:
    ok, parts = True, []
    for p, k in ((3, 2), (2, 3), (5, 2), (2, 6)):
        R = galois_gring(p, k)
        mods = [_descent(R, 1), _hilbert90_module(R, 7), _block_sum(_descent(R, 1), _hilbert90_module(R, 11)), _descent(R, 2)]
        good = 0
        for i, S in enumerate(mods):
            _, M = to_twisted_module(S)
            S_back, _ = from_twisted_module(R, S.subgroup, M)
            forward = S_back.same_as(S)
            Mc = _random_basis(M, 100 + i)
            S2, P = from_twisted_module(R, S.subgroup, Mc)
            _, M2 = to_twisted_module(S2)
            backward = np.array_equal(np.einsum("ab,ibc->iac", P, M2.action) % p, np.einsum("iab,bc->iac", Mc.action, P) % p)
            good += forward and backward
        ok &= good == len(mods) and len(mods) >= 3
        parts.append(f"GF({p}^{k}): {good}/{len(mods)}")
    return ok, "; ".join(parts)


def criterion_9() -> tuple[bool, str]:
    G = build_group("symmetric(3)")
    subs = enumerate_subgroups(G)
    pairs, mism, differs = 0, 0, 0
    for H in subs:
        for K in subs:
            X, Y = cosets(H), cosets(K)
            n_dc = len(double_coset_reps(H, K, G.whole))
            pairs += 1
            mism += len(burnside_hom_basis(X, Y)) != n_dc
            differs += len(transitive_span_basis(X, Y)) != n_dc
    pt, basis = burnside_ring_basis(build_group("cyclic(2)"))
    free = BurnsideElement.of(basis[0])
    ring_ok = burnside_product(free, free) == 2 * free and free.compose(free) == 2 * free
    detail = (
        f"{pairs} pairs, {mism} mismatches (one span per orbit of G/H x G/K); "
        f"[C2/e]^2 = 2[C2/e]: {ring_ok}; the full span-category rank exceeds #double cosets on {differs} pairs"
    )
    return mism == 0 and ring_ok, detail


CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("1 double-coset counting identity", criterion_1),
    ("2 free left basis round trip", criterion_2),
    ("3 Mackey decomposition witness", criterion_3),
    ("4 Auslander isomorphism and single block", criterion_4),
    ("5 Mackey axiom suites", criterion_5),
    ("6 trivial-action comparison with group algebras", criterion_6),
    ("7 negative control flagged at MF6 only", criterion_7),
    ("8 semilinear round trips", criterion_8),
    ("9 Burnside layer", criterion_9),
]


def _run(index: int) -> tuple[bool, str]:
    name, fn = CRITERIA[index]
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'} criterion {name}: {detail} [{time.perf_counter() - t0:.1f}s]"
    RESULTS.append(line)
    print(line)
    return ok, line


def test_criterion_1():
    ok, line = _run(0)
    assert ok, line


def test_criterion_2():
    ok, line = _run(1)
    assert ok, line


def test_criterion_3():
    ok, line = _run(2)
    assert ok, line


def test_criterion_4():
    ok, line = _run(3)
    assert ok, line


def test_criterion_5():
    ok, line = _run(4)
    assert ok, line


def test_criterion_6():
    ok, line = _run(5)
    assert ok, line


def test_criterion_7():
    ok, line = _run(6)
    assert ok, line


def test_criterion_8():
    ok, line = _run(7)
    assert ok, line


def test_criterion_9():
    ok, line = _run(8)
    assert ok, line


if __name__ == "__main__":
    import sys

    results = [_run(i)[0] for i in range(len(CRITERIA))]
    sys.exit(0 if all(results) else 1)
