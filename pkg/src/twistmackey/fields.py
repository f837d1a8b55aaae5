"""Finite fields GF(p^k) over an explicit irreducible modulus.

An element is the integer whose base-p digits (least significant first) are
its coefficients in the power basis ``1, a, a^2, ...`` where ``a`` is the
class of ``x``.  The prime field is therefore ``{0, ..., p-1}``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .rings import FiniteRing, RingError

Poly = list[int]  # little-endian coefficients over GF(p)


def _trim(f: Poly) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return _trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def poly_divmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    g = _trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim(f)
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        c = r[-1] * inv_lead % p
        shift = len(r) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            r[i + shift] = (r[i + shift] - c * b) % p
        r = _trim(r)
    return _trim(q), r


def poly_mod(f: Poly, g: Poly, p: int) -> Poly:
    return poly_divmod(f, g, p)[1]


def poly_gcd(f: Poly, g: Poly, p: int) -> Poly:
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, poly_mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def poly_powmod(f: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = [1]
    base = poly_mod(f, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p): ``gcd(f, x^(p^i) - x) = 1`` for all ``1 <= i < deg f``."""
    f = _trim(list(f))
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    xp: Poly = [0, 1]
    for _ in range(1, k):
        xp = poly_powmod(xp, p, f, p)
        if len(poly_gcd(f, poly_sub(xp, [0, 1], p), p)) != 1:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_primitive(f: Sequence[int], p: int) -> bool:
    """True if ``f`` is irreducible and ``x`` generates the multiplicative group of GF(p)[x]/(f)."""
    f = _trim(list(f))
    if not is_irreducible(f, p):
        return False
    order = p ** (len(f) - 1) - 1
    return all(poly_powmod([0, 1], order // q, f, p) != [1] for q in _prime_factors(order))


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def default_modulus(p: int, k: int) -> Poly:
    """First primitive monic polynomial of degree ``k``, lower coefficients enumerated as a base-p integer."""
    if k == 1:
        return [0, 1]
    for code in range(p**k):
        lower = [(code // p**i) % p for i in range(k)]
        f = lower + [1]
        if is_primitive(f, p):
            return f
    raise RingError(f"no primitive polynomial of degree {k} over GF({p})")  # pragma: no cover


class FiniteField(FiniteRing):
    """GF(p^k) as a tabulated finite ring."""

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None) -> None:
        if not is_prime(p):
            raise RingError(f"characteristic must be prime, got {p}")
        if k < 1:
            raise RingError(f"degree must be positive, got {k}")
        if modulus is None:
            modulus = default_modulus(p, k)
        mod = _trim([int(c) % p for c in modulus])
        if len(mod) != k + 1 or mod[-1] != 1:
            raise RingError(f"modulus must be monic of degree {k}")
        if not is_irreducible(mod, p):
            raise RingError(f"modulus {mod} is reducible over GF({p})")
        self.p = p
        self.k = k
        self.modulus = tuple(mod)
        q = p**k
        self.q = q
        digits = np.array([[(x // p**i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
        self._digits = digits
        weights = p ** np.arange(k)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        polys = [_trim(list(row)) for row in digits]
        for a in range(q):
            for b in range(a, q):
                r = poly_mod(poly_mul(polys[a], polys[b], p), list(mod), p)
                v = sum(c * p**i for i, c in enumerate(r))
                mul[a, b] = mul[b, a] = v
        labels = [_poly_label(polys[x]) for x in range(q)]
        super().__init__(add, mul, zero=0, one=1, label=f"GF({p}^{k})" if k > 1 else f"GF({p})", element_labels=labels, check=False)

    def to_vector(self, x: int) -> np.ndarray:
        return self._digits[x].copy()

    def from_vector(self, v: Sequence[int]) -> int:
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(v)))

    @property
    def generator(self) -> int:
        """The class of ``x`` (``1`` when ``k = 1``: then a primitive root is searched instead)."""
        if self.k > 1:
            return self.p
        for g in range(1, self.p):
            if len({self.power(g, e) for e in range(self.p - 1)}) == self.p - 1:
                return g
        raise RingError("no primitive root")  # pragma: no cover

    def frobenius(self, power: int = 1) -> np.ndarray:
        """Table of ``x -> x^(p^power)``."""
        e = pow(self.p, power % self.k, self.q - 1) if self.q > 2 else 1
        out = np.array([self.power(x, e) if x else 0 for x in range(self.q)], dtype=np.int64)
        return out

    def power(self, a: int, e: int) -> int:
        result, base = self.one, a
        while e:
            if e & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            e >>= 1
        return result

    def multiplication_matrix(self, c: int) -> np.ndarray:
        """Matrix over GF(p) of ``t -> c t`` in the power basis (columns are images of basis vectors)."""
        basis = [self.p**i for i in range(self.k)]
        return np.array([self._digits[self.mul_table[c, b]] for b in basis], dtype=np.int64).T

    def automorphism_matrix(self, table: Sequence[int]) -> np.ndarray:
        """Matrix over GF(p) of an additive map given as an element table."""
        basis = [self.p**i for i in range(self.k)]
        return np.array([self._digits[table[b]] for b in basis], dtype=np.int64).T


def _poly_label(coeffs: Poly) -> str:
    if not coeffs:
        return "0"
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(reversed(terms))
