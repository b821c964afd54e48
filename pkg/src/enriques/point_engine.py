"""Enumeration of P^n(F_q) and batched evaluation of quadric systems.

Points are normalised so that the first nonzero coordinate is 1 and are
emitted in lexicographic order of their coordinate codes.  The point set
is split into slabs by the position of the leading 1; slabs can be
processed independently and merged.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .ff_core import FiniteField, Polynomial, monomials
from .ff_core.tables import FieldTables

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 18

QUADRATIC_MONOMIALS = monomials(6, 2)
# index pairs (i, j), i <= j, of each quadratic monomial x_i x_j
QUADRATIC_PAIRS = [tuple(i for i, e in enumerate(m) for _ in range(e)) for m in QUADRATIC_MONOMIALS]


class BudgetExceeded(RuntimeError):
    pass


def projective_count(q: int, n: int = 5) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


@dataclass
class PointIterator:
    """Canonical enumeration of P^(dim-1)(F_q)."""

    field: FiniteField
    dim: int = 6
    chunk: int = CHUNK

    def __len__(self) -> int:
        return projective_count(self.field.q, self.dim - 1)

    @property
    def slabs(self) -> list[int]:
        """Leading-coordinate positions, in canonical (lex) order."""
        return list(range(self.dim - 1, -1, -1))

    def slab_size(self, lead: int) -> int:
        return self.field.q ** (self.dim - 1 - lead)

    def slab_chunks(self, lead: int) -> Iterator[np.ndarray]:
        q = self.field.q
        free = self.dim - 1 - lead
        total = q**free
        for start in range(0, total, self.chunk):
            idx = np.arange(start, min(total, start + self.chunk), dtype=np.int64)
            pts = np.zeros((len(idx), self.dim), dtype=np.int64)
            pts[:, lead] = 1
            for c in range(self.dim - 1, lead, -1):
                pts[:, c] = idx % q
                idx //= q
            yield pts

    def slab(self, lead: int) -> np.ndarray:
        return np.concatenate(list(self.slab_chunks(lead)))

    def chunks(self) -> Iterator[np.ndarray]:
        for lead in self.slabs:
            yield from self.slab_chunks(lead)

    def array(self) -> np.ndarray:
        return np.concatenate(list(self.chunks()))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for block in self.chunks():
            for row in block:
                yield tuple(int(v) for v in row)


def enumerate_points(field: FiniteField, dim: int = 6, budget: int = DEFAULT_BUDGET) -> PointIterator:
    n = projective_count(field.q, dim - 1)
    if n > budget:
        raise BudgetExceeded(f"P^{dim - 1}(F_{field.q}) has {n} points, budget {budget}")
    return PointIterator(field, dim)


def canonical_sort(pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return pts.reshape(0, pts.shape[1] if pts.ndim == 2 else 6)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def normalize(pts: np.ndarray, tabs: FieldTables) -> np.ndarray:
    """Scale each row so that its first nonzero entry is 1 (zero rows kept)."""
    pts = np.asarray(pts, dtype=np.int64)
    nz = pts != 0
    has = nz.any(axis=1)
    lead = np.argmax(nz, axis=1)
    lead_val = pts[np.arange(len(pts)), lead]
    lead_val = np.where(has, lead_val, 1)
    inv = tabs.inv(lead_val)
    return tabs.mul(pts, inv[:, None])


# -- quadric coefficient packing --------------------------------------------------------

def quadric_codes(quadrics: Sequence[Polynomial]) -> np.ndarray:
    """(len(quadrics), 21) array of coefficient codes in QUADRATIC_MONOMIALS order."""
    index = {e: i for i, e in enumerate(QUADRATIC_MONOMIALS)}
    out = np.zeros((len(quadrics), len(QUADRATIC_MONOMIALS)), dtype=np.int64)
    for r, f in enumerate(quadrics):
        for e, c in f.terms.items():
            if sum(e) != 2:
                raise ValueError("quadric has terms of degree != 2")
            out[r, index[e]] = c.value
    return out


@dataclass
class EvalTable:
    """Log/antilog tables of the evaluation field plus the quadric
    coefficients embedded into it."""

    field: FiniteField
    coeffs: np.ndarray
    tables: FieldTables = dc_field(init=False)

    def __post_init__(self):
        self.tables = self.field.tables()
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)

    @classmethod
    def build(cls, quadrics: Sequence[Polynomial], target: FiniteField) -> "EvalTable":
        if not quadrics:
            return cls(target, np.zeros((0, 21), dtype=np.int64))
        source = quadrics[0].ring
        codes = quadric_codes(quadrics)
        if source != target:
            emb = np.array(source.embedding_into(target), dtype=np.int64)
            codes = emb[codes]
        return cls(target, codes)

    def evaluate(self, pts: np.ndarray, which: int) -> np.ndarray:
        """Values of quadric ``which`` at each row of ``pts``."""
        t = self.tables
        out = np.zeros(len(pts), dtype=np.int64)
        for m, (i, j) in enumerate(QUADRATIC_PAIRS):
            c = int(self.coeffs[which, m])
            if c:
                prod_ = t.mul(pts[:, i], pts[:, j])
                out = t.add(out, t.mul(prod_, c))
        return out

    def zero_mask(self, pts: np.ndarray) -> np.ndarray:
        """Boolean mask of rows where every quadric vanishes; quadrics are
        applied in turn to the survivors of the previous one."""
        alive = np.arange(len(pts))
        for w in range(len(self.coeffs)):
            if not alive.size:
                break
            vals = self.evaluate(pts[alive], w)
            alive = alive[vals == 0]
        mask = np.zeros(len(pts), dtype=bool)
        mask[alive] = True
        return mask


def batch_evaluate(
    quadrics: Sequence[Polynomial] | EvalTable, iterator: PointIterator, workers: int = 1
) -> np.ndarray:
    """Zero locus of the quadrics on the iterator's points, canonically sorted."""
    table = quadrics if isinstance(quadrics, EvalTable) else EvalTable.build(quadrics, iterator.field)
    if table.field != iterator.field:
        raise ValueError("quadric coefficients are not embedded in the iterator's field")

    def run(block: np.ndarray) -> np.ndarray:
        return block[table.zero_mask(block)]

    if workers <= 1:
        parts = [run(b) for b in iterator.chunks()]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, iterator.chunks()))
    parts = [p for p in parts if len(p)]
    if not parts:
        return np.zeros((0, iterator.dim), dtype=np.int64)
    return canonical_sort(np.concatenate(parts))


def naive_zero_locus(quadrics: Sequence[Polynomial], iterator: PointIterator) -> np.ndarray:
    """Reference implementation: Polynomial.evaluate at every point."""
    target = iterator.field
    polys = list(quadrics)
    if polys and polys[0].ring != target:
        emb = polys[0].ring.embedding_into(target)
        polys = [f.change_ring(target, lambda c: target.element(emb[c.value])) for f in polys]
    out = []
    for pt in iterator:
        elems = [target.element(v) for v in pt]
        if all(not f.evaluate(elems) for f in polys):
            out.append(pt)
    return np.array(out, dtype=np.int64).reshape(-1, iterator.dim)


def frobenius_map(point: Sequence[int], field: FiniteField, power: int = 1, base_q: int | None = None) -> tuple[int, ...]:
    """Raise coordinates to the (base_q^power)-th power and renormalise.

    ``base_q`` defaults to the characteristic.
    """
    base_q = base_q or field.p
    e = base_q**power
    coords = [field.pow(v, e) if v else 0 for v in point]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    inv = field.inv(lead)
    return tuple(field.mul(c, inv) for c in coords)


def frobenius_array(pts: np.ndarray, field: FiniteField, power: int = 1, base_q: int | None = None) -> np.ndarray:
    t = field.tables()
    base_q = base_q or field.p
    return normalize(t.pow(pts, base_q**power), t)
