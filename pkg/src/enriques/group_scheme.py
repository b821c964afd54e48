"""The length-2 group scheme G_{a,b} and its action on P^5.

G_{a,b}(S) = {s in S : s^2 = a s} with group law m(s, t) = s + t - b s t,
for a, b in the base ring with ab = 2.  In characteristic 2 the three
specialisations are Z/2Z (a != 0, b = 0), mu_2 (a = 0, b != 0) and
alpha_2 (a = b = 0).

The group acts on the coordinates (x1, x2, x3, y1, y2, y3) of P^5 through
three copies of the regular representation: x_i is fixed and
y_i -> s x_i + (1 - b s) y_i.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Sequence

import numpy as np

from .ff_core import (
    VARS6,
    ZAB,
    FiniteField,
    PointElement,
    PointRing,
    Polynomial,
    RingError,
    monomials,
)
from .ff_core.linalg import matmul
from .ff_core.linalg import rank as field_rank

# Sign of the b y_i y_j term in the mixed family x_i y_j + y_i x_j + eps b y_i y_j.
# Fixed by resolve_mixed_sign(); see README.
MIXED_SIGN = -1


class GroupType(enum.Enum):
    ETALE2 = "etale2"
    MU2 = "mu2"
    ALPHA2 = "alpha2"
    MIXED_ORDINARY = "ordinary"


@dataclass(frozen=True)
class GroupSchemeParams:
    """The pair (a, b) with ab = 2 in ``ring``."""

    a: object
    b: object
    ring: object

    def __post_init__(self):
        a = self.ring.coerce(self.a)
        b = self.ring.coerce(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a * b != self.ring.coerce(2):
            raise ValueError(f"ab must equal 2 (got a={a}, b={b})")

    @classmethod
    def universal(cls) -> "GroupSchemeParams":
        return cls(ZAB.a, ZAB.b, ZAB)

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    def point_ring(self) -> PointRing:
        return PointRing(self.ring, self.a)

    def universal_point(self) -> PointElement:
        """The formal point s of S = R[s]/(s^2 - a s)."""
        return self.point_ring().s

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "char": self.characteristic}

    @classmethod
    def for_group(cls, field: FiniteField, group: GroupType | str) -> "GroupSchemeParams":
        """Standard representatives over a finite field."""
        group = GroupType(group)
        p = field.p
        if p == 2:
            table = {
                GroupType.ETALE2: (1, 0),
                GroupType.MU2: (0, 1),
                GroupType.ALPHA2: (0, 0),
            }
            if group not in table:
                raise ValueError("in characteristic 2 the group must be etale2, mu2 or alpha2")
            a, b = table[group]
        else:
            if group is not GroupType.MIXED_ORDINARY:
                raise ValueError(f"group {group.value} requires characteristic 2")
            a, b = 1, 2
        return cls(field(a), field(b), field)


def classify(params: GroupSchemeParams, char: int | None = None) -> GroupType:
    """Tate-Oort type of G_{a,b}."""
    p = params.characteristic if char is None else char
    if params.a * params.b != params.ring.coerce(2):
        raise ValueError("ab != 2")
    if p != 2:
        return GroupType.MIXED_ORDINARY
    if params.a and not params.b:
        return GroupType.ETALE2
    if params.b and not params.a:
        return GroupType.MU2
    if not params.a and not params.b:
        return GroupType.ALPHA2
    raise ValueError("a and b cannot both be nonzero in characteristic 2")  # pragma: no cover


# Which Enriques type a G_{a,b}-torsor cover belongs to.  The cover of X is
# a torsor under the Cartier dual of Pic^tau(X); Z/2Z and mu_2 are dual to
# each other and alpha_2 is self-dual.
ENRIQUES_TYPE = {
    GroupType.ETALE2: ("singular", "mu2"),
    GroupType.MU2: ("classical", "Z/2Z"),
    GroupType.ALPHA2: ("supersingular", "alpha2"),
    GroupType.MIXED_ORDINARY: ("ordinary (char != 2)", "Z/2Z"),
}


def _check_point(s: PointElement, params: GroupSchemeParams) -> None:
    if s * s != params.a * s:
        raise ValueError("point does not satisfy s^2 = a s")


def group_law(s: PointElement, t: PointElement, params: GroupSchemeParams) -> PointElement:
    _check_point(s, params)
    _check_point(t, params)
    return s + t - params.b * s * t


def regular_representation(s: PointElement, params: GroupSchemeParams) -> list[list[PointElement]]:
    """The matrix (1, s; 0, 1 - b s)."""
    _check_point(s, params)
    one = s.ring.one
    return [[one, s], [s.ring.zero, one - params.b * s]]


def action_matrix(s: PointElement, params: GroupSchemeParams) -> list[list[PointElement]]:
    """6x6 substitution matrix: x_i -> x_i, y_i -> s x_i + (1 - b s) y_i."""
    _check_point(s, params)
    S = s.ring
    m = [[S.zero] * 6 for _ in range(6)]
    for i in range(3):
        m[i][i] = S.one
        m[3 + i][i] = s
        m[3 + i][3 + i] = S.one - params.b * s
    return m


# -- invariant quadrics ---------------------------------------------------------

BASIS_LABELS = (
    [f"x{i + 1}x{j + 1}" for i, j in combinations_with_replacement(range(3), 2)]
    + [f"y{i + 1}^2-a*x{i + 1}y{i + 1}" for i in range(3)]
    + [f"x{i + 1}y{j + 1}+y{i + 1}x{j + 1}+eps*b*y{i + 1}y{j + 1}" for i, j in combinations(range(3), 2)]
)


def invariant_basis(params: GroupSchemeParams, sign: int = MIXED_SIGN) -> list[Polynomial]:
    """The 12 invariant quadrics, in the fixed order that defines the
    coordinates of P^11:

    x1x1, x1x2, x1x3, x2x2, x2x3, x3x3,
    y_i^2 - a x_i y_i (i = 1, 2, 3),
    x_i y_j + y_i x_j + sign * b y_i y_j for (i, j) = (1,2), (1,3), (2,3).
    """
    R = params.ring
    x = Polynomial.gens(R)[:3]
    y = Polynomial.gens(R)[3:]
    out = [x[i] * x[j] for i, j in combinations_with_replacement(range(3), 2)]
    out += [y[i] * y[i] - x[i] * y[i] * params.a for i in range(3)]
    eps_b = params.b * R.coerce(sign)
    out += [x[i] * y[j] + y[i] * x[j] + y[i] * y[j] * eps_b for i, j in combinations(range(3), 2)]
    return out


def check_invariance(q: Polynomial, params: GroupSchemeParams) -> bool:
    """Whether q is fixed by the universal point of G_{a,b}."""
    if not q.is_homogeneous():
        raise ValueError("invariance is tested on homogeneous polynomials")
    s = params.universal_point()
    S = s.ring
    lifted = q.change_ring(S)
    moved = q.substitute_linear(action_matrix(s, params))
    return moved == lifted


def resolve_mixed_sign() -> int:
    """Run the invariance oracle over Z[a,b]/(ab-2) on both candidate signs
    of the mixed family and return the one that passes."""
    params = GroupSchemeParams.universal()
    passing = [
        eps for eps in (1, -1)
        if all(check_invariance(q, params) for q in invariant_basis(params, eps)[9:])
    ]
    if len(passing) != 1:
        raise RuntimeError(f"sign resolution ambiguous: {passing}")
    return passing[0]


# -- graded invariant theory over a finite field ---------------------------------

def _action_difference_matrix(params: GroupSchemeParams, d: int) -> np.ndarray:
    """Matrix of f -> (s-coefficient of f(action)) on the degree-d slice.

    Columns are indexed by monomials (graded-lex descending), rows by the
    image coordinates.  Its kernel is the space of degree-d invariants,
    since the s^0 part of f(action) is f itself.
    """
    field = params.ring
    mons = monomials(6, d)
    index = {e: i for i, e in enumerate(mons)}
    s = params.universal_point()
    action = action_matrix(s, params)
    mat = np.zeros((len(mons), len(mons)), dtype=np.int64)
    for col, e in enumerate(mons):
        image = Polynomial(field, VARS6, {e: 1}).substitute_linear(action)
        for exp, c in image.terms.items():
            mat[index[exp], col] = c.c1.value
    return mat


def _coefficient_rows(polys: Sequence[Polynomial], d: int) -> np.ndarray:
    mons = monomials(6, d)
    index = {e: i for i, e in enumerate(mons)}
    mat = np.zeros((len(polys), len(mons)), dtype=np.int64)
    for r, f in enumerate(polys):
        for exp, c in f.terms.items():
            mat[r, index[exp]] = c.value
    return mat


def _products(basis: Sequence[Polynomial], count: int) -> list[Polynomial]:
    out = []
    for combo in combinations_with_replacement(range(len(basis)), count):
        f = basis[combo[0]]
        for i in combo[1:]:
            f = f * basis[i]
        out.append(f)
    return out


def invariant_dimension(params: GroupSchemeParams, d: int) -> int:
    """Dimension of the degree-d invariants over a finite field."""
    field = _require_field(params)
    n = len(monomials(6, d))
    return n - field_rank(_action_difference_matrix(params, d), field)


def product_span_dimension(params: GroupSchemeParams, d: int) -> int:
    """Dimension of the span of (d/2)-fold products of the invariant basis."""
    field = _require_field(params)
    if d % 2:
        raise ValueError("degree must be even")
    if d == 0:
        return 1
    prods = _products(invariant_basis(params), d // 2)
    return field_rank(_coefficient_rows(prods, d), field)


def even_invariants_generated(params: GroupSchemeParams, degree: int) -> bool:
    """Whether the degree-``degree`` invariants are spanned by products of
    the 12 invariant quadrics."""
    if degree % 2:
        raise ValueError("degree must be even")
    if degree > 6:
        raise ValueError("degree bounded by 6")
    field = _require_field(params)
    if degree == 0:
        return True
    prods = _products(invariant_basis(params), degree // 2)
    rows = _coefficient_rows(prods, degree)
    # the products must themselves be invariant: D . rows^T == 0
    D = _action_difference_matrix(params, degree)
    image = matmul(D, rows.T, field)
    if image.any():
        return False
    return field_rank(rows, field) == invariant_dimension(params, degree)


def _require_field(params: GroupSchemeParams) -> FiniteField:
    if not isinstance(params.ring, FiniteField):
        raise RingError("graded invariant computations need a finite field base")
    return params.ring


# -- fixed planes -----------------------------------------------------------------

def fixed_planes(params: GroupSchemeParams) -> dict[str, list[list[object]]]:
    """The planes of P^5 stable under the action, as 3x6 equation matrices.

    ``P-`` = {x = 0}, where the group acts through the character 1 - b s.
    ``P+`` = {x = b y}, where the action is trivial; it exists as a plane
    distinct from P- only when b != 0, and coincides with P- otherwise.
    """
    R = params.ring
    minus = [[R.one if c == r else R.zero for c in range(6)] for r in range(3)]
    plus = [
        [R.one if c == r else (-params.b if c == r + 3 else R.zero) for c in range(6)]
        for r in range(3)
    ]
    return {"P+": plus, "P-": minus}
