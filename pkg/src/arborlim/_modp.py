"""Exact linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Everything here
is plain Gaussian elimination; sizes in this package are tiny (dimensions
rarely exceed a dozen), so clarity beats asymptotics.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def modmat(a, p: int) -> np.ndarray:
    """Coerce to an int64 matrix reduced mod p."""
    m = np.asarray(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def inv_scalar(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (R, pivot column list)."""
    r = a.copy() % p
    rows, cols = r.shape
    pivots: list[int] = []
    i = 0
    for j in range(cols):
        nz = np.nonzero(r[i:, j])[0]
        if nz.size == 0:
            continue
        k = i + int(nz[0])
        if k != i:
            r[[i, k]] = r[[k, i]]
        r[i] = (r[i] * inv_scalar(r[i, j], p)) % p
        for other in range(rows):
            if other != i and r[other, j]:
                r[other] = (r[other] - r[other, j] * r[i]) % p
        pivots.append(j)
        i += 1
        if i == rows:
            break
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of ker(a) as columns of an (n, k) matrix."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    r, pivots = rref(a, p)
    free = [j for j in range(cols) if j not in pivots]
    basis = zeros(cols, len(free))
    for idx, j in enumerate(free):
        basis[j, idx] = 1
        for pi, pj in enumerate(pivots):
            basis[pj, idx] = (-r[pi, j]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b mod p, or None.  b may be a vector or matrix."""
    vec = b.ndim == 1
    bm = b.reshape(-1, 1) if vec else b
    rows = a.shape[0]
    if bm.shape[0] != rows:
        raise ValueError("shape mismatch in solve")
    aug = np.concatenate([a % p, bm % p], axis=1)
    r, pivots = rref(aug, p)
    ncols = a.shape[1]
    for pj in pivots:
        if pj >= ncols:
            return None
    x = zeros(ncols, bm.shape[1])
    for pi, pj in enumerate(pivots):
        x[pj] = r[pi, ncols:]
    return x[:, 0] if vec else x


def inv(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inv needs a square matrix")
    x = solve(a, eye(n), p)
    if x is None or rank(a, p) != n:
        raise ValueError("matrix is singular mod p")
    return x


def column_space_projector(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (B, R) with B a basis of im(a) and R the rref used to build it."""
    r, pivots = rref(a.T % p, p)
    basis = r[: len(pivots)].T.copy()
    return basis, r


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


@lru_cache(maxsize=None)
def all_matrices(rows: int, cols: int, p: int) -> tuple:
    """Every (rows x cols) matrix over F_p.  Guarded; meant for tiny shapes."""
    if p ** (rows * cols) > 1_000_000:
        raise ValueError(f"refusing to enumerate p^{rows * cols} matrices")
    out = []
    for entries in product(range(p), repeat=rows * cols):
        m = np.array(entries, dtype=np.int64).reshape(rows, cols)
        m.setflags(write=False)
        out.append(m)
    return tuple(out)


@lru_cache(maxsize=None)
def general_linear(n: int, p: int) -> tuple:
    """All invertible n x n matrices over F_p (n = 0 gives the empty matrix)."""
    if n == 0:
        m = zeros(0, 0)
        m.setflags(write=False)
        return (m,)
    return tuple(m for m in all_matrices(n, n, p) if is_invertible(m, p))


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1


@lru_cache(maxsize=None)
def gl_generators(n: int, p: int) -> tuple:
    """A small generating set of GL_n(F_p), verified by closure."""
    if n == 0 or (n == 1 and p == 2):
        return ()
    cands = []
    if p > 2:
        d = eye(n)
        d[0, 0] = _primitive_root(p)
        cands.append(d)
    if n >= 2:
        t = eye(n)
        t[0, 1] = 1
        cands.append(t)
        c = zeros(n, n)
        for i in range(n):
            c[i, (i + 1) % n] = 1
        cands.append(c)
    closure = {eye(n).tobytes()}
    frontier = [eye(n)]
    while frontier:
        m = frontier.pop()
        for g in cands:
            nxt = (g @ m) % p
            key = nxt.tobytes()
            if key not in closure:
                closure.add(key)
                frontier.append(nxt)
    if len(closure) != gl_order(n, p):
        raise AssertionError("generator set does not generate GL")
    out = []
    for m in cands:
        mm = m.copy()
        mm.setflags(write=False)
        out.append(mm)
    return tuple(out)
