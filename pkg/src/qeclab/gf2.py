"""Small dense GF(2) linear algebra on numpy uint8 arrays."""
from __future__ import annotations

import numpy as np


def row_reduce(a: np.ndarray) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Reduced row echelon form.

    Returns (rref, pivot columns, transform) with ``transform @ a == rref`` (mod 2).
    """
    m = (np.asarray(a, dtype=np.uint8) & 1).copy()
    rows, cols = m.shape
    t = np.eye(rows, dtype=np.uint8)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(m[r:, c]) + r
        if len(hits) == 0:
            continue
        p = hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
            t[[r, p]] = t[[p, r]]
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        m[others] ^= m[r]
        t[others] ^= t[r]
        pivots.append(c)
        r += 1
    return m, pivots, t


def rank(a: np.ndarray) -> int:
    if np.asarray(a).size == 0:
        return 0
    return len(row_reduce(a)[1])


def solve_left(a: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    """Find coefficients ``c`` with ``c @ a == v`` (mod 2), or None."""
    a = np.asarray(a, dtype=np.uint8)
    v = np.asarray(v, dtype=np.uint8) & 1
    if a.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8) if not v.any() else None
    rref, pivots, t = row_reduce(a)
    c = np.zeros(a.shape[0], dtype=np.uint8)
    resid = v.copy()
    for i, col in enumerate(pivots):
        if resid[col]:
            resid ^= rref[i]
            c ^= t[i]
    return None if resid.any() else c


def solve_right(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """Find ``x`` with ``a @ x == b`` (mod 2), or None."""
    c = solve_left(np.asarray(a, dtype=np.uint8).T, b)
    return c


def nullspace(a: np.ndarray) -> np.ndarray:
    """Basis (rows) of {x : a @ x == 0}."""
    a = np.asarray(a, dtype=np.uint8)
    n = a.shape[1]
    rref, pivots, _ = row_reduce(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.uint8)
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = rref[i, f]
        basis.append(x)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), n)
