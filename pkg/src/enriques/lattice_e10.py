"""The Enriques lattice E10 = T_{2,3,7}.

Vectors are integer coordinate arrays in the simple-root basis, ordered
alpha_1, ..., alpha_9, alpha_0 (so alpha_0 is the last entry).  The
diagram is the chain alpha_1 - ... - alpha_9 with alpha_0 attached to
alpha_3; roots have square -2 and adjacent roots pair to 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import numpy as np

RANK = 10
# position of alpha_i in the coordinate vector
POS = {i: i - 1 for i in range(1, 10)} | {0: 9}
EDGES = [(i, i + 1) for i in range(1, 9)] + [(3, 0)]
REFLECTION_GUARD = 10**6


class LatticeError(ValueError):
    pass


def gram_t237() -> np.ndarray:
    g = np.zeros((RANK, RANK), dtype=np.int64)
    np.fill_diagonal(g, -2)
    for i, j in EDGES:
        g[POS[i], POS[j]] = g[POS[j], POS[i]] = 1
    return g


GRAM = gram_t237()


def simple_root(i: int) -> np.ndarray:
    v = np.zeros(RANK, dtype=np.int64)
    v[POS[i]] = 1
    return v


def simple_roots() -> list[np.ndarray]:
    return [simple_root(i) for i in (1, 2, 3, 4, 5, 6, 7, 8, 9, 0)]


def pairing(x: Sequence[int], y: Sequence[int], gram: np.ndarray = GRAM) -> int:
    return int(np.asarray(x, dtype=np.int64) @ gram @ np.asarray(y, dtype=np.int64))


def square(x: Sequence[int]) -> int:
    return pairing(x, x)


# -- exact linear algebra ----------------------------------------------------------

def _fraction_matrix(m: np.ndarray) -> list[list[Fraction]]:
    return [[Fraction(int(v)) for v in row] for row in m]


def determinant(m: np.ndarray = GRAM) -> int:
    a = _fraction_matrix(m)
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def inverse(m: np.ndarray = GRAM) -> list[list[Fraction]]:
    n = len(m)
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(_fraction_matrix(m))]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        lead = a[c][c]
        a[c] = [x / lead for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def signature(m: np.ndarray = GRAM) -> tuple[int, int]:
    """(positive, negative) inertia by symmetric Gaussian elimination
    (Sylvester's law of inertia)."""
    a = _fraction_matrix(m)
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            # all diagonal entries vanish: use e_j + e_k with a_jk != 0
            pair = next(((j, k) for j in active for k in active if j != k and a[j][k] != 0), None)
            if pair is None:
                break
            j, k = pair
            for r in range(n):
                a[r][j] += a[r][k]
            for c in range(n):
                a[j][c] += a[k][c]
            continue
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for r in active:
            f = a[r][i] / d
            if f:
                for c in active:
                    a[r][c] -= f * a[i][c]
            a[r][i] = Fraction(0)
        for c in active:
            a[i][c] = Fraction(0)
    return pos, neg


# -- weights, reflections, chambers --------------------------------------------------

def fundamental_weight(i: int) -> np.ndarray:
    """The vector w with w . alpha_j = delta_ij (integral: GRAM is unimodular)."""
    inv = inverse(GRAM)
    col = [inv[r][POS[i]] for r in range(RANK)]
    if any(v.denominator != 1 for v in col):
        raise LatticeError("lattice is not unimodular")
    return np.array([int(v) for v in col], dtype=np.int64)


def reflect(alpha: Sequence[int], x: Sequence[int]) -> np.ndarray:
    """s_alpha(x) = x + (x . alpha) alpha, for alpha of square -2."""
    alpha = np.asarray(alpha, dtype=np.int64)
    if square(alpha) != -2:
        raise LatticeError("reflection needs a root of square -2")
    x = np.asarray(x, dtype=np.int64)
    return x + pairing(x, alpha) * alpha


def weyl_vector() -> np.ndarray:
    """Sum of the fundamental weights; pairs to 1 with every simple root."""
    return sum(fundamental_weight(i) for i in range(10))


def chamber_reduce(
    x: Sequence[int], roots: Iterable[Sequence[int]] | None = None, guard: int = REFLECTION_GUARD
) -> tuple[np.ndarray, list[int]]:
    """Reflect x until x . alpha >= 0 for every alpha in ``roots``.

    Returns the representative and the word of reflections as indices into
    ``roots`` (default: the simple roots in coordinate order).
    """
    roots = [np.asarray(r, dtype=np.int64) for r in (roots if roots is not None else simple_roots())]
    for r in roots:
        if square(r) != -2:
            raise LatticeError("root set contains a vector of square != -2")
    x = np.asarray(x, dtype=np.int64)
    if square(x) < 0:
        raise LatticeError("chamber reduction needs x . x >= 0")
    R = np.array(roots)
    word: list[int] = []
    while True:
        vals = R @ GRAM @ x
        bad = np.nonzero(vals < 0)[0]
        if bad.size == 0:
            return x, word
        j = int(bad[0])
        x = x + int(vals[j]) * R[j]
        word.append(j)
        if len(word) > guard:
            raise LatticeError(f"chamber reduction exceeded {guard} reflections")


def apply_word(x: Sequence[int], word: Sequence[int], roots: Sequence[Sequence[int]] | None = None) -> np.ndarray:
    roots = roots if roots is not None else simple_roots()
    x = np.asarray(x, dtype=np.int64)
    for j in word:
        x = reflect(roots[j], x)
    return x


def is_ample_class(x: Sequence[int], roots: Iterable[Sequence[int]]) -> bool:
    return all(pairing(x, r) > 0 for r in roots)


# -- the Phi function -------------------------------------------------------------------

def _box_points(n: int, dims: int) -> np.ndarray:
    axis = np.arange(-n, n + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * dims), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _inverse_gram() -> np.ndarray:
    return np.array([[int(v) for v in row] for row in inverse(GRAM)], dtype=np.int64)


def isotropic_in_box(n: int, basis: str = "weight", chunk: int = 49):
    """Yield arrays (alpha coordinates) of nonzero isotropic vectors whose
    coordinates in ``basis`` lie in [-n, n].

    ``basis="alpha"`` boxes the simple-root coordinates; ``basis="weight"``
    boxes the fundamental-weight coordinates c_i = f . alpha_i.  The first
    five coordinates are enumerated in chunks, the last five as one
    vectorised block.
    """
    if basis == "alpha":
        form, to_alpha = GRAM, None
    elif basis == "weight":
        form = to_alpha = _inverse_gram()
    else:
        raise LatticeError(f"unknown basis {basis!r}")
    U = _box_points(n, 5)
    V = U
    F11, F12, F22 = form[:5, :5], form[:5, 5:], form[5:, 5:]
    vv = np.einsum("ij,jk,ik->i", V, F22, V)
    VT = (2 * V).T
    for start in range(0, len(U), chunk):
        u = U[start : start + chunk]
        uu = np.einsum("ij,jk,ik->i", u, F11, u)
        sq = (u @ F12) @ VT
        sq += uu[:, None]
        sq += vv[None, :]
        iu, iv = np.nonzero(sq == 0)
        if iu.size:
            vecs = np.concatenate([u[iu], V[iv]], axis=1)
            vecs = vecs[np.any(vecs != 0, axis=1)]
            if len(vecs):
                yield vecs if to_alpha is None else vecs @ to_alpha.T


def phi(x: Sequence[int], box: int = 3, basis: str = "weight") -> int | None:
    """min |x . f| over nonzero isotropic f in the coefficient box, or None
    when the box holds no isotropic vector.  Primitive isotropic classes
    stand for half-pencils, so no factor 1/2 is applied."""
    value, _ = phi_with_witness(x, box, basis)
    return value


def phi_with_witness(
    x: Sequence[int], box: int = 3, basis: str = "weight"
) -> tuple[int | None, np.ndarray | None]:
    x = np.asarray(x, dtype=np.int64)
    if square(x) <= 0:
        raise LatticeError("phi needs a class of positive square")
    gx = GRAM @ x
    best = None
    witness = None
    for vecs in isotropic_in_box(box, basis):
        vals = np.abs(vecs @ gx)
        k = int(np.argmin(vals))
        if best is None or vals[k] < best:
            best = int(vals[k])
            witness = vecs[k]
    return best, witness


def phi_over(x: Sequence[int], candidates: Iterable[Sequence[int]]) -> int | None:
    """min |x . f| over the given isotropic vectors."""
    vals = [abs(pairing(x, f)) for f in candidates if square(f) == 0 and np.any(np.asarray(f) != 0)]
    return min(vals) if vals else None


# -- orbit count ------------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def from_factorization(f: dict[int, int]) -> int:
    out = 1
    for p, e in f.items():
        out *= p**e
    return out


# printed prime factorisations of |O+(10, F_2)| and |(Z/2)^8 x| S_9|
O_PLUS_10_F2 = {2: 20, 3: 5, 5: 2, 7: 1, 17: 1, 31: 1}
D9_QUOTIENT = {2: 15, 3: 4, 5: 1, 7: 1}
CV_CLASSES_MOD_AUT = 252_960


def orbit_count_check() -> int:
    """|O+(10,F_2)| / |(Z/2Z)^8 x S_9| from the factorisations, with the
    denominator recomputed as 2^8 * 9!."""
    denom = 2**8 * factorial(9)
    if denom != from_factorization(D9_QUOTIENT):
        raise AssertionError(f"2^8 * 9! = {denom} does not match the printed factorisation")
    num = from_factorization(O_PLUS_10_F2)
    if num % denom:
        raise AssertionError("quotient is not an integer")
    quotient = num // denom
    if quotient != CV_CLASSES_MOD_AUT:
        raise AssertionError(f"quotient {quotient} != {CV_CLASSES_MOD_AUT}")
    return quotient
