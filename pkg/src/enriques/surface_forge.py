"""Three invariant quadrics in P^5 and their verification.

A :class:`QuadricSystem` is a rank-3 matrix of coefficients with respect
to the 12 invariant quadrics of :func:`group_scheme.invariant_basis`.  Its
zero locus X~ is the candidate cover; X = X~/G is its image under the
quotient map Psi: P^5 -> P^11 given by the invariant basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from . import point_engine as pe
from .ff_core import FiniteField, Polynomial, make_field, monomials
from .ff_core.fields import field_from_descriptor
from .ff_core.linalg import rank
from .group_scheme import (
    GroupSchemeParams,
    GroupType,
    classify,
    fixed_planes,
    invariant_basis,
)

# defaults of the verification pipeline
MAX_EXT = 3
FIXED_PLANE_EXT = 4
HILBERT_DMAX = 6
WEIL_MAX_Q = 16
B2 = 10


class NotAcceptedError(ValueError):
    pass


def ci_series(dmax: int) -> list[int]:
    """Coefficients of (1 - t^2)^3 / (1 - t)^6 up to t^dmax."""
    num = [1, 0, -3, 0, 3, 0, -1]
    den = [comb(n + 5, 5) for n in range(dmax + 1)]
    return [sum(num[i] * den[d - i] for i in range(min(d, 6) + 1)) for d in range(dmax + 1)]


def extension(field: FiniteField, k: int) -> FiniteField:
    return make_field(field.p, field.k * k)


def sampler(seed: int) -> np.random.Generator:
    """The campaign PRNG: numpy PCG64 seeded with the 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & (2**64 - 1)))


@dataclass(frozen=True)
class QuadricSystem:
    field: FiniteField
    params: GroupSchemeParams
    coeffs: tuple[tuple[int, ...], ...]
    seed: int | None = None

    def __post_init__(self):
        coeffs = tuple(tuple(int(c) % self.field.q for c in row) for row in self.coeffs)
        if len(coeffs) != 3 or any(len(r) != 12 for r in coeffs):
            raise ValueError("coefficient matrix must be 3x12")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def group(self) -> GroupType:
        return classify(self.params)

    @property
    def q(self) -> int:
        return self.field.q

    def coefficient_rank(self) -> int:
        return rank(np.array(self.coeffs), self.field)

    @cached_property
    def basis(self) -> list[Polynomial]:
        return invariant_basis(self.params)

    @cached_property
    def quadrics(self) -> list[Polynomial]:
        out = []
        for row in self.coeffs:
            f = Polynomial.zero(self.field)
            for c, b in zip(row, self.basis):
                if c:
                    f = f + b * self.field.element(c)
            out.append(f)
        return out

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor(),
            "params": self.params.to_json(),
            "group": self.group.value,
            "coeffs": [list(r) for r in self.coeffs],
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuadricSystem":
        field = field_from_descriptor(data["field"])
        p = data["params"]
        params = GroupSchemeParams(field.element(int(p["a"])), field.element(int(p["b"])), field)
        return cls(field, params, tuple(tuple(r) for r in data["coeffs"]), data.get("seed"))


def sample_system(field: FiniteField, params: GroupSchemeParams, seed: int) -> QuadricSystem:
    """Deterministic rank-3 coefficient matrix drawn from ``sampler(seed)``."""
    rng = sampler(seed)
    while True:
        c = rng.integers(0, field.q, size=(3, 12), dtype=np.int64)
        if rank(c, field) == 3:
            return QuadricSystem(field, params, tuple(tuple(int(v) for v in r) for r in c), seed)


# -- Hilbert function ---------------------------------------------------------------------

def hilbert_slice_dim(system: QuadricSystem, d: int) -> int:
    """dim of the degree-d part of k[x, y]/(Q1, Q2, Q3)."""
    if not 0 <= d <= 8:
        raise ValueError("degree outside 0..8")
    mons = monomials(6, d)
    if d < 2:
        return len(mons)
    index = {e: i for i, e in enumerate(mons)}
    mult = monomials(6, d - 2)
    rows = np.zeros((3 * len(mult), len(mons)), dtype=np.int64)
    r = 0
    for Q in system.quadrics:
        for m in mult:
            for e, c in Q.terms.items():
                rows[r, index[tuple(a + b for a, b in zip(e, m))]] = c.value
            r += 1
    return len(mons) - rank(rows, system.field)


def hilbert_dims(system: QuadricSystem, dmax: int = HILBERT_DMAX) -> list[int]:
    return [hilbert_slice_dim(system, d) for d in range(dmax + 1)]


def is_complete_intersection(system: QuadricSystem, dmax: int = HILBERT_DMAX) -> bool:
    return hilbert_dims(system, dmax) == ci_series(dmax)


# -- points ---------------------------------------------------------------------------------

def rational_points(system: QuadricSystem, k: int = 1, budget: int = pe.DEFAULT_BUDGET, workers: int = 1) -> np.ndarray:
    """Points of X~ over F_{q^k} as canonical code rows over ``extension(field, k)``."""
    big = extension(system.field, k)
    it = pe.enumerate_points(big, budget=budget)
    return pe.batch_evaluate(pe.EvalTable.build(system.quadrics, big), it, workers=workers)


def _embedded(polys: Sequence[Polynomial], target: FiniteField) -> list[Polynomial]:
    if not polys or polys[0].ring == target:
        return list(polys)
    emb = polys[0].ring.embedding_into(target)
    return [f.change_ring(target, lambda c: target.element(emb[c.value])) for f in polys]


def jacobian_codes(system: QuadricSystem, target: FiniteField) -> np.ndarray:
    """(3, 6, 6) array: entry [j, i, m] is the coefficient of variable m in dQ_j/dx_i."""
    out = np.zeros((3, 6, 6), dtype=np.int64)
    for j, Q in enumerate(_embedded(system.quadrics, target)):
        for i in range(6):
            for e, c in Q.derivative(i).terms.items():
                out[j, i, e.index(1)] = c.value
    return out


def _jacobians(system: QuadricSystem, pts: np.ndarray, target: FiniteField) -> np.ndarray:
    t = target.tables()
    J = jacobian_codes(system, target)
    vals = np.zeros((len(pts), 3, 6), dtype=np.int64)
    for j in range(3):
        for i in range(6):
            acc = np.zeros(len(pts), dtype=np.int64)
            for m in range(6):
                c = int(J[j, i, m])
                if c:
                    acc = t.add(acc, t.mul(pts[:, m], c))
            vals[:, j, i] = acc
    return vals


def _full_rank_mask(mats: np.ndarray, field: FiniteField) -> np.ndarray:
    """Whether each 3x6 matrix has rank 3 (some 3x3 minor nonzero)."""
    t = field.tables()
    ok = np.zeros(len(mats), dtype=bool)
    from itertools import combinations

    for c0, c1, c2 in combinations(range(6), 3):
        m = mats[:, :, [c0, c1, c2]]

        def e(r, c):
            return m[:, r, c]

        det = t.sub(
            t.add(
                t.add(t.mul(e(0, 0), t.mul(e(1, 1), e(2, 2))), t.mul(e(0, 1), t.mul(e(1, 2), e(2, 0)))),
                t.mul(e(0, 2), t.mul(e(1, 0), e(2, 1))),
            ),
            t.add(
                t.add(t.mul(e(0, 2), t.mul(e(1, 1), e(2, 0))), t.mul(e(0, 0), t.mul(e(1, 2), e(2, 1)))),
                t.mul(e(0, 1), t.mul(e(1, 0), e(2, 2))),
            ),
        )
        ok |= det != 0
        if ok.all():
            break
    return ok


def smoothness_check(system: QuadricSystem, k: int = 1, points: np.ndarray | None = None) -> list[tuple[int, ...]]:
    """Points of X~(F_{q^k}) where the 3x6 Jacobian has rank < 3."""
    big = extension(system.field, k)
    pts = rational_points(system, k) if points is None else points
    if not len(pts):
        return []
    ok = _full_rank_mask(_jacobians(system, pts, big), big)
    return [tuple(int(v) for v in row) for row in pts[~ok]]


# -- fixed planes -----------------------------------------------------------------------------

def plane_parametrization(params: GroupSchemeParams, name: str) -> np.ndarray:
    """6x3 matrix L (codes over the base field) with the plane = image of P^2."""
    field = params.ring
    L = np.zeros((6, 3), dtype=np.int64)
    for i in range(3):
        if name == "P-":
            L[3 + i, i] = 1
        elif name == "P+":
            # x = b y
            L[i, i] = params.b.value
            L[3 + i, i] = 1
        else:
            raise ValueError(f"unknown plane {name!r}")
    fixed_planes(params)  # validates the plane names against the action
    return L % field.q


def plane_points(system: QuadricSystem, name: str, k: int) -> np.ndarray:
    big = extension(system.field, k)
    t = big.tables()
    L = plane_parametrization(system.params, name)
    if big != system.field:
        emb = np.array(system.field.embedding_into(big), dtype=np.int64)
        L = emb[L]
    uv = pe.PointIterator(big, dim=3).array()
    pts = np.zeros((len(uv), 6), dtype=np.int64)
    for r in range(6):
        acc = np.zeros(len(uv), dtype=np.int64)
        for c in range(3):
            if L[r, c]:
                acc = t.add(acc, t.mul(uv[:, c], int(L[r, c])))
        pts[:, r] = acc
    table = pe.EvalTable.build(system.quadrics, big)
    return pe.canonical_sort(pe.normalize(pts[table.zero_mask(pts)], t))


def fixed_plane_check(system: QuadricSystem, max_ext: int = FIXED_PLANE_EXT) -> dict[str, bool]:
    """Whether X~ misses each fixed plane over F_{q^k}, k <= max_ext."""
    out = {}
    for name in ("P+", "P-"):
        out[name] = all(len(plane_points(system, name, k)) == 0 for k in range(1, max_ext + 1))
    return out


# -- the quotient map Psi -----------------------------------------------------------------------

def involution_matrix(params: GroupSchemeParams) -> np.ndarray:
    """The action of the nontrivial point s = a (etale cases) as a 6x6 code
    matrix acting on column vectors: x -> x, y -> a x + (1 - ab) y."""
    g = classify(params)
    if g not in (GroupType.ETALE2, GroupType.MIXED_ORDINARY):
        raise ValueError(f"{g.value} has no nontrivial rational point")
    field = params.ring
    d = field.one - params.a * params.b
    A = np.zeros((6, 6), dtype=np.int64)
    for i in range(3):
        A[i, i] = 1
        A[3 + i, i] = params.a.value
        A[3 + i, 3 + i] = d.value
    return A


def apply_linear(A: np.ndarray, pts: np.ndarray, field: FiniteField, source: FiniteField | None = None) -> np.ndarray:
    """Rows p -> normalise(A p) with A given over ``source`` (embedded)."""
    t = field.tables()
    if source is not None and source != field:
        A = np.array(source.embedding_into(field), dtype=np.int64)[A]
    out = np.zeros_like(pts)
    for r in range(A.shape[0]):
        acc = np.zeros(len(pts), dtype=np.int64)
        for c in range(A.shape[1]):
            if A[r, c]:
                acc = t.add(acc, t.mul(pts[:, c], int(A[r, c])))
        out[:, r] = acc
    return pe.normalize(out, t)


def psi_images(system: QuadricSystem, pts: np.ndarray, target: FiniteField) -> np.ndarray:
    """Normalised images in P^11 of the given points (codes over ``target``)."""
    table = pe.EvalTable.build(_embedded(system.basis, target), target)
    vals = np.stack([table.evaluate(pts, w) for w in range(12)], axis=1)
    if np.any(~vals.any(axis=1)):
        raise ValueError("all 12 invariants vanish at some point")
    return pe.normalize(vals, target.tables())


def quotient_point(system: QuadricSystem, point: Sequence[int], field: FiniteField | None = None) -> tuple[int, ...]:
    """Psi(point) for one point given by codes over ``field`` (default: the system's field)."""
    field = field or system.field
    img = psi_images(system, np.array([list(point)], dtype=np.int64), field)
    return tuple(int(v) for v in img[0])


def psi_fibers(system: QuadricSystem, pts: np.ndarray, target: FiniteField) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    imgs = psi_images(system, pts, target)
    fibers: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for p, im in zip(pts, imgs):
        fibers.setdefault(tuple(int(v) for v in im), []).append(tuple(int(v) for v in p))
    return fibers


def _twist_constants(params: GroupSchemeParams, Q: int, big: FiniteField) -> tuple[int, int]:
    """(eta, zeta) in F_{Q^2} with eta^Q - d eta = c and zeta^Q = d zeta != 0,
    where sigma: y -> c x + d y."""
    emb = params.ring.embedding_into(big)
    c = emb[params.a.value]
    d = emb[(params.ring.one - params.a * params.b).value]
    eta = next(e for e in range(big.q) if big.sub(big.pow(e, Q), big.mul(d, e)) == c)
    zeta = next(z for z in range(1, big.q) if big.pow(z, Q) == big.mul(d, z))
    return eta, zeta


def twisted_count(system: QuadricSystem, k: int, budget: int = pe.DEFAULT_BUDGET) -> int:
    """#{p in X~(F_{Q^2}) : F_Q(p) = sigma(p)}, Q = q^k.

    Such points are exactly the lines through the F_Q-space
    {(x, eta x + zeta z) : x, z in F_Q^3}.
    """
    Fk = extension(system.field, k)
    big = extension(system.field, 2 * k)
    Q = Fk.q
    eta, zeta = _twist_constants(system.params, Q, big)
    t = big.tables()
    emb = np.array(Fk.embedding_into(big), dtype=np.int64)
    table = pe.EvalTable.build(system.quadrics, big)
    total = 0
    for block in pe.enumerate_points(Fk, budget=budget).chunks():
        xz = emb[block]
        v = np.empty_like(xz)
        v[:, :3] = xz[:, :3]
        v[:, 3:] = t.add(t.mul(xz[:, :3], eta), t.mul(xz[:, 3:], zeta))
        total += int(table.zero_mask(v).sum())
    return total


def count_points(
    system: QuadricSystem, k: int, cover: int | None = None, budget: int = pe.DEFAULT_BUDGET
) -> tuple[int, int]:
    """(#X~(F_{q^k}), #X(F_{q^k}))."""
    if cover is None:
        cover = len(rational_points(system, k, budget=budget))
    if system.group in (GroupType.MU2, GroupType.ALPHA2):
        return cover, cover
    fixed_twisted = twisted_count(system, k, budget=budget)
    if (cover + fixed_twisted) % 2:
        raise ArithmeticError("orbit count is not an integer; is the action free?")
    return cover, (cover + fixed_twisted) // 2


def weil_ok(counts: dict[int, tuple[int, int]], q: int) -> bool:
    return all(abs(quot - 1 - q ** (2 * k)) <= B2 * q**k for k, (_, quot) in counts.items())


# -- the pipeline ---------------------------------------------------------------------------------

@dataclass
class VerificationReport:
    hilbert_ok: bool | None = None
    hilbert_dims: list[int] = dc_field(default_factory=list)
    smooth_points_checked: dict[int, int] = dc_field(default_factory=dict)
    singular_points: list[list[int]] = dc_field(default_factory=list)
    fixed_plane_clear: dict[str, bool] = dc_field(default_factory=dict)
    psi_ok: bool | None = None
    psi_fibers: dict[int, dict[str, int]] = dc_field(default_factory=dict)
    point_counts: dict[int, list[int]] = dc_field(default_factory=dict)
    weil_ok: bool | None = None
    max_ext: int = MAX_EXT
    fixed_plane_ext: int = FIXED_PLANE_EXT

    def to_json(self) -> dict:
        return {
            "hilbert_ok": self.hilbert_ok,
            "hilbert_dims": self.hilbert_dims,
            "smooth_points_checked": {str(k): v for k, v in self.smooth_points_checked.items()},
            "singular_points": self.singular_points,
            "fixed_plane_clear": self.fixed_plane_clear,
            "psi_ok": self.psi_ok,
            "psi_fibers": {str(k): v for k, v in self.psi_fibers.items()},
            "point_counts": {str(k): v for k, v in self.point_counts.items()},
            "weil_ok": self.weil_ok,
            "max_ext": self.max_ext,
            "fixed_plane_ext": self.fixed_plane_ext,
        }

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        return cls(
            hilbert_ok=d.get("hilbert_ok"),
            hilbert_dims=list(d.get("hilbert_dims", [])),
            smooth_points_checked={int(k): v for k, v in d.get("smooth_points_checked", {}).items()},
            singular_points=[list(p) for p in d.get("singular_points", [])],
            fixed_plane_clear=dict(d.get("fixed_plane_clear", {})),
            psi_ok=d.get("psi_ok"),
            psi_fibers={int(k): v for k, v in d.get("psi_fibers", {}).items()},
            point_counts={int(k): list(v) for k, v in d.get("point_counts", {}).items()},
            weil_ok=d.get("weil_ok"),
            max_ext=d.get("max_ext", MAX_EXT),
            fixed_plane_ext=d.get("fixed_plane_ext", FIXED_PLANE_EXT),
        )


@dataclass
class SurfaceCandidate:
    system: QuadricSystem
    report: VerificationReport
    status: str  # "accepted" or "rejected:<reason>"

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"

    def to_json(self) -> dict:
        d = self.system.to_json()
        d["report"] = self.report.to_json()
        d["status"] = self.status
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "SurfaceCandidate":
        return cls(QuadricSystem.from_json(d), VerificationReport.from_json(d.get("report", {})), d.get("status", "unverified"))


def verify(
    system: QuadricSystem,
    max_ext: int = MAX_EXT,
    fixed_plane_ext: int = FIXED_PLANE_EXT,
    dmax: int = HILBERT_DMAX,
    weil_max_q: int = WEIL_MAX_Q,
    stop_early: bool = True,
    budget: int = pe.DEFAULT_BUDGET,
) -> SurfaceCandidate:
    """Run every check; the first failing one names the rejection reason.

    With ``stop_early`` later checks are skipped after a failure and their
    report fields stay empty.
    """
    rep = VerificationReport(max_ext=max_ext, fixed_plane_ext=fixed_plane_ext)
    reasons: list[str] = []

    def failed(reason: str) -> bool:
        reasons.append(reason)
        return stop_early

    if system.coefficient_rank() != 3:
        return SurfaceCandidate(system, rep, "rejected:rank")

    rep.hilbert_dims = hilbert_dims(system, dmax)
    rep.hilbert_ok = rep.hilbert_dims == ci_series(dmax)
    if not rep.hilbert_ok and failed("hilbert"):
        return _finish(system, rep, reasons)

    rep.fixed_plane_clear = fixed_plane_check(system, fixed_plane_ext)
    for name, ok in rep.fixed_plane_clear.items():
        if not ok and failed(f"fixed_plane:{name}"):
            return _finish(system, rep, reasons)

    cover_counts: dict[int, int] = {}
    etale = system.group in (GroupType.ETALE2, GroupType.MIXED_ORDINARY)
    rep.psi_ok = True
    for k in range(1, max_ext + 1):
        big = extension(system.field, k)
        pts = rational_points(system, k, budget=budget)
        cover_counts[k] = len(pts)
        rep.smooth_points_checked[k] = len(pts)
        sing = smoothness_check(system, k, points=pts)
        rep.singular_points.extend([k, *p] for p in sing)
        if sing and failed("singular_point"):
            return _finish(system, rep, reasons)
        if len(pts):
            fibers = psi_fibers(system, pts, big)
            sizes = [len(v) for v in fibers.values()]
            rep.psi_fibers[k] = {"points": len(pts), "images": len(fibers), "max_fiber": max(sizes)}
            ok = max(sizes) <= 2
            if etale:
                sigma = apply_linear(involution_matrix(system.params), pts, big, system.field)
                ok = ok and np.array_equal(psi_images(system, pts, big), psi_images(system, sigma, big))
                # free action: every fiber is a sigma-orbit of size 2
                ok = ok and all(s == 2 for s in sizes)
            else:
                ok = ok and all(s == 1 for s in sizes)
            if not ok:
                rep.psi_ok = False
                if failed("psi"):
                    return _finish(system, rep, reasons)

    k = 1
    while system.q**k <= weil_max_q:
        cover = cover_counts.get(k)
        rep.point_counts[k] = list(count_points(system, k, cover, budget=budget))
        k += 1
    rep.weil_ok = weil_ok({k: tuple(v) for k, v in rep.point_counts.items()}, system.q)
    if not rep.weil_ok:
        failed("weil")
    return _finish(system, rep, reasons)


def _finish(system: QuadricSystem, rep: VerificationReport, reasons: list[str]) -> SurfaceCandidate:
    return SurfaceCandidate(system, rep, "accepted" if not reasons else "rejected:" + reasons[0])


def count_quotient_points(obj: SurfaceCandidate | QuadricSystem, k: int) -> tuple[int, int]:
    """(count_cover, count_quotient) over F_{q^k} for an accepted candidate."""
    if isinstance(obj, SurfaceCandidate):
        if not obj.accepted:
            raise NotAcceptedError(f"candidate status is {obj.status}")
        obj = obj.system
    return count_points(obj, k)
