"""Dense linear algebra over finite fields on arrays of element codes."""

from __future__ import annotations

import numpy as np

from .fields import FiniteField


def row_reduce(mat: np.ndarray, field: FiniteField) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    t = field.tables()
    m = np.array(mat, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = t.inv(m[r, c])
        m[r] = t.mul(m[r], inv)
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = m[others, c][:, None]
            m[others] = t.sub(m[others], t.mul(factors, m[r][None, :]))
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray, field: FiniteField) -> int:
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    return len(row_reduce(mat, field)[1])


def matmul(a: np.ndarray, b: np.ndarray, field: FiniteField) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if field.k == 1:
        return (a @ b) % field.p
    t = field.tables()
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = t.add(out, t.mul(a[:, k : k + 1], b[k : k + 1, :]))
    return out


def nullspace_dim(mat: np.ndarray, field: FiniteField) -> int:
    return np.asarray(mat).shape[1] - rank(mat, field)
