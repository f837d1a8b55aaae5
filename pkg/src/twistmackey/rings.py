"""Finite commutative rings with fully tabulated arithmetic.

Elements are integers ``0..size-1``.  Addition and multiplication are
stored as lookup tables, so every ring-level check in the package can be
exhaustive instead of axiom-trusting.
"""

from __future__ import annotations

import re
from typing import Sequence

import numpy as np


class RingError(ValueError):
    pass


class FiniteRing:
    """A finite commutative unital ring given by addition and multiplication tables."""

    def __init__(
        self,
        add: np.ndarray,
        mul: np.ndarray,
        zero: int,
        one: int,
        label: str,
        element_labels: Sequence[str] | None = None,
        check: bool = True,
    ) -> None:
        add = np.asarray(add, dtype=np.int64)
        mul = np.asarray(mul, dtype=np.int64)
        n = add.shape[0]
        if add.shape != (n, n) or mul.shape != (n, n):
            raise RingError("addition and multiplication tables must be square and equal-sized")
        if check:
            _check_ring_axioms(add, mul, zero, one)
        add.setflags(write=False)
        mul.setflags(write=False)
        self.add_table = add
        self.mul_table = mul
        self.size = n
        self.zero = zero
        self.one = one
        self.label = label
        neg = np.argmax(add == zero, axis=1).astype(np.int64)
        neg.setflags(write=False)
        self.neg_table = neg
        self.element_labels = list(element_labels) if element_labels is not None else [str(i) for i in range(n)]
        unit_rows = mul == one
        self._inv = np.where(unit_rows.any(axis=1), np.argmax(unit_rows, axis=1), -1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"

    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def is_unit(self, a: int) -> bool:
        return bool(self._inv[a] >= 0)

    def inv(self, a: int) -> int:
        if self._inv[a] < 0:
            raise RingError(f"{self.element_labels[a]} is not a unit in {self.label}")
        return int(self._inv[a])

    def units(self) -> list[int]:
        return [int(a) for a in np.flatnonzero(self._inv >= 0)]

    def multiple(self, n: int) -> int:
        """``n·1`` in this ring."""
        out = self.zero
        for _ in range(n % self.characteristic()):
            out = int(self.add_table[out, self.one])
        return out

    def characteristic(self) -> int:
        k, x = 1, self.one
        while x != self.zero:
            x = int(self.add_table[x, self.one])
            k += 1
        return k

    def power(self, a: int, e: int) -> int:
        out = self.one
        for _ in range(e):
            out = int(self.mul_table[out, a])
        return out

    def is_field(self) -> bool:
        return len(self.units()) == self.size - 1

    def is_automorphism(self, table: Sequence[int]) -> str | None:
        """``None`` if ``table`` is a ring automorphism, else a description of the first failure."""
        f = np.asarray(table, dtype=np.int64)
        if f.shape != (self.size,) or sorted(f.tolist()) != list(range(self.size)):
            return "not a bijection on ring elements"
        if f[self.one] != self.one:
            return "does not fix 1"
        bad = np.argwhere(f[self.add_table] != self.add_table[f][:, f])
        if len(bad):
            a, b = bad[0]
            return f"not additive at ({a},{b})"
        bad = np.argwhere(f[self.mul_table] != self.mul_table[f][:, f])
        if len(bad):
            a, b = bad[0]
            return f"not multiplicative at ({a},{b})"
        return None


def _check_ring_axioms(add: np.ndarray, mul: np.ndarray, zero: int, one: int) -> None:
    n = add.shape[0]
    idx = np.arange(n)
    if not np.array_equal(add, add.T) or not np.array_equal(mul, mul.T):
        raise RingError("ring tables must be commutative")
    if not np.array_equal(add[zero], idx) or not np.array_equal(mul[one], idx):
        raise RingError("zero/one are not neutral")
    if not (add == zero).any(axis=1).all():
        raise RingError("additive inverses missing")
    if not np.array_equal(add[add], add[:, add]):
        raise RingError("addition is not associative")
    if not np.array_equal(mul[mul], mul[:, mul]):
        raise RingError("multiplication is not associative")
    # a(b+c) = ab + ac
    lhs = mul[:, add]  # [a, b, c] -> a*(b+c)
    rhs = add[mul[:, :, None], mul[:, None, :]]
    if not np.array_equal(lhs, rhs):
        raise RingError("multiplication does not distribute over addition")


class IntegersMod(FiniteRing):
    def __init__(self, n: int) -> None:
        if n < 1:
            raise RingError(f"modulus must be positive, got {n}")
        a = np.arange(n)
        super().__init__(
            (a[:, None] + a[None, :]) % n,
            (a[:, None] * a[None, :]) % n,
            zero=0,
            one=1 % n,
            label=f"Z/{n}",
            check=False,
        )
        self.modulus = n


class ProductRing(FiniteRing):
    """Finite product of finite rings, mixed-radix encoded (last factor fastest)."""

    def __init__(self, factors: Sequence[FiniteRing]) -> None:
        if not factors:
            raise RingError("product of zero rings")
        self.factors = list(factors)
        sizes = [f.size for f in factors]
        n = int(np.prod(sizes))
        digits = np.array(np.unravel_index(np.arange(n), sizes)).T  # (n, len)
        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        stride = 1
        for pos in reversed(range(len(factors))):
            f = factors[pos]
            da = digits[:, pos]
            add += f.add_table[da[:, None], da[None, :]] * stride
            mul += f.mul_table[da[:, None], da[None, :]] * stride
            stride *= f.size
        zero = int(np.ravel_multi_index([f.zero for f in factors], sizes))
        one = int(np.ravel_multi_index([f.one for f in factors], sizes))
        labels = ["(" + ",".join(factors[i].element_labels[d] for i, d in enumerate(row)) + ")" for row in digits]
        super().__init__(add, mul, zero, one, label=" x ".join(f.label for f in factors), element_labels=labels, check=False)
        self._sizes = sizes

    def component(self, a: int, i: int) -> int:
        return int(np.unravel_index(a, self._sizes)[i])


def build_ring(spec: str | dict | FiniteRing) -> FiniteRing:
    """Ring from ``"gf(p,k)"``, ``"zmod(n)"``, ``"product(spec, ...)"`` or dict forms.

    Dict forms: ``{"gf": [p, k], "modulus": [c0, c1, ..., 1]}``,
    ``{"zmod": n}``, ``{"product": [spec, ...]}``.
    """
    from .fields import FiniteField
    from .groups import _split_args

    if isinstance(spec, FiniteRing):
        return spec
    if isinstance(spec, dict):
        if "gf" in spec:
            p, k = spec["gf"]
            return FiniteField(int(p), int(k), modulus=spec.get("modulus"))
        if "zmod" in spec:
            return IntegersMod(int(spec["zmod"]))
        if "product" in spec:
            return ProductRing([build_ring(s) for s in spec["product"]])
        raise RingError(f"cannot interpret ring description {spec!r}")
    m = re.match(r"^\s*([a-z]+)\s*\((.*)\)\s*$", str(spec))
    if not m:
        raise RingError(f"cannot parse ring description {spec!r}")
    kind, args = m.group(1), _split_args(m.group(2))
    try:
        if kind == "gf" and len(args) in (1, 2):
            return FiniteField(int(args[0]), int(args[1]) if len(args) == 2 else 1)
        if kind == "zmod" and len(args) == 1:
            return IntegersMod(int(args[0]))
    except ValueError as exc:
        if isinstance(exc, RingError):
            raise
        raise RingError(f"ring parameters must be integers in {spec!r}") from exc
    if kind == "product" and len(args) >= 2:
        return ProductRing([build_ring(a) for a in args])
    raise RingError(f"cannot parse ring description {spec!r}")
