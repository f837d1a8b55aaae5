"""Dense linear algebra over a prime field GF(p).

Matrices are plain ``numpy`` int64 arrays with entries in ``range(p)``.
Elimination is vectorised row-by-row; sizes in this package stay below a
few thousand rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_mod(A, p: int) -> np.ndarray:
    return np.asarray(A, dtype=np.int64) % p


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` over GF(p) and its pivot columns."""
    R = as_mod(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, col])
        if not len(nz):
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] * pow(int(R[row, col]), -1, p) % p
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        if len(others):
            R[others] = (R[others] - np.outer(R[others, col], R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def kernel(A, p: int) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as rows, one per free column, echelon-normalised."""
    A = as_mod(A, p)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        for r, pc in enumerate(pivots):
            K[i, pc] = (-R[r, f]) % p
    return K


@dataclass(frozen=True)
class SolveResult:
    rank: int
    kernel: np.ndarray
    solution: np.ndarray | None
    consistent: bool


def rref_solve(A, b=None, p: int = 2) -> SolveResult:
    """Rank, kernel basis and (if ``b`` is given) a particular solution of ``A x = b``.

    An inconsistent system is reported with ``consistent=False`` and
    ``solution=None`` rather than raised.  ``b`` may be a vector or a matrix
    of right-hand sides (columns).
    """
    A = as_mod(A, p)
    m, n = A.shape
    K = kernel(A, p)
    r = n - K.shape[0]
    if b is None:
        return SolveResult(r, K, None, True)
    B = as_mod(b, p)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    R, pivots = rref(np.hstack([A, B]), p)
    if any(pc >= n for pc in pivots):
        return SolveResult(r, K, None, False)
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, n:]
    return SolveResult(r, K, X[:, 0] if vec else X, True)


def solve(A, b, p: int) -> np.ndarray:
    res = rref_solve(A, b, p)
    if not res.consistent:
        raise ValueError("linear system has no solution")
    return res.solution


def inverse(A, p: int) -> np.ndarray:
    A = as_mod(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, pivots = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] >= n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def row_basis(A, p: int) -> np.ndarray:
    """Echelon basis (rows) of the row space of ``A``."""
    A = as_mod(A, p)
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0)
    R, pivots = rref(A, p)
    return R[: len(pivots)]


def matmul(A, B, p: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % p
