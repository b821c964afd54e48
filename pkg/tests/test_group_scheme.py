from __future__ import annotations

import itertools

import pytest

from enriques.ff_core import ZAB, Polynomial, PointRing, make_field
from enriques.group_scheme import (
    BASIS_LABELS,
    ENRIQUES_TYPE,
    MIXED_SIGN,
    GroupSchemeParams,
    GroupType,
    action_matrix,
    check_invariance,
    classify,
    even_invariants_generated,
    fixed_planes,
    group_law,
    invariant_basis,
    invariant_dimension,
    product_span_dimension,
    regular_representation,
    resolve_mixed_sign,
)

F2, F3 = make_field(2), make_field(3)
SPECIALISATIONS = [(F2, 1, 0), (F2, 0, 1), (F2, 0, 0), (F3, 1, 2)]


def two_point_params():
    """G over S = Z[a,b]/(ab-2)[s][t] with its two independent points s, t."""
    inner = PointRing(ZAB, ZAB.a)
    outer = PointRing(inner, inner.coerce(ZAB.a))
    P = GroupSchemeParams(outer.coerce(ZAB.a), outer.coerce(ZAB.b), outer)
    return P, outer.coerce(inner.s), outer.s


def matmul2(A, B):
    return [[A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)] for i in range(2)]


def test_params_require_ab_2():
    with pytest.raises(ValueError):
        GroupSchemeParams(F2(1), F2(1), F2)
    with pytest.raises(ValueError):
        GroupSchemeParams(F3(1), F3(1), F3)
    GroupSchemeParams(F3(2), F3(1), F3)


@pytest.mark.parametrize(
    "field,a,b,expected",
    [(F2, 1, 0, GroupType.ETALE2), (F2, 0, 1, GroupType.MU2), (F2, 0, 0, GroupType.ALPHA2), (F3, 1, 2, GroupType.MIXED_ORDINARY)],
)
def test_classify(field, a, b, expected):
    assert classify(GroupSchemeParams(field(a), field(b), field)) is expected


def test_standard_params():
    for g in ("etale2", "mu2", "alpha2"):
        assert classify(GroupSchemeParams.for_group(F2, g)).value == g
    with pytest.raises(ValueError):
        GroupSchemeParams.for_group(F3, "alpha2")
    with pytest.raises(ValueError):
        GroupSchemeParams.for_group(F2, "ordinary")


def test_enriques_type_duality():
    # the torsor group is the Cartier dual of Pic^tau: Z/2 <-> mu_2, alpha_2 self-dual
    assert ENRIQUES_TYPE[GroupType.ETALE2][1] == "mu2"
    assert ENRIQUES_TYPE[GroupType.MU2][1] == "Z/2Z"
    assert ENRIQUES_TYPE[GroupType.ALPHA2][1] == "alpha2"


def test_group_law_is_closed_and_homomorphic():
    P, s, t = two_point_params()
    m = group_law(s, t, P)
    assert m * m == P.a * m
    assert matmul2(regular_representation(s, P), regular_representation(t, P)) == regular_representation(m, P)
    assert group_law(s, t, P) == group_law(t, s, P)


def test_identity_and_inverse_laws():
    P, s, _ = two_point_params()
    zero = s.ring.zero
    assert group_law(s, zero, P) == s
    assert group_law(s, s, P) == zero
    u = s.ring.one - P.b * s
    assert u * u == s.ring.one


def test_group_law_rejects_non_points():
    P = GroupSchemeParams.universal()
    S = P.point_ring()
    with pytest.raises(ValueError):
        group_law(S(1), S.s, P)


def test_sign_resolution():
    assert resolve_mixed_sign() == MIXED_SIGN == -1


def test_wrong_sign_fails_universally():
    P = GroupSchemeParams.universal()
    mixed = invariant_basis(P, sign=+1)[9:]
    assert not any(check_invariance(q, P) for q in mixed)


def test_universal_invariance():
    P = GroupSchemeParams.universal()
    assert all(check_invariance(q, P) for q in invariant_basis(P))


@pytest.mark.parametrize("field,a,b", SPECIALISATIONS)
def test_specialised_invariance(field, a, b):
    P = GroupSchemeParams(field(a), field(b), field)
    basis = invariant_basis(P)
    assert len(basis) == 12 == len(BASIS_LABELS)
    assert all(check_invariance(q, P) for q in basis)


@pytest.mark.parametrize("field,a,b", SPECIALISATIONS)
def test_non_invariant_detected(field, a, b):
    P = GroupSchemeParams(field(a), field(b), field)
    x = Polynomial.gens(field)
    # x1 y2 -> x1 y2 + s x1 x2 - b s x1 y2 is never invariant
    assert not check_invariance(x[0] * x[4], P)
    assert not check_invariance(x[3] * x[4], P)


def test_action_matrix_shape():
    P = GroupSchemeParams.universal()
    M = action_matrix(P.universal_point(), P)
    assert len(M) == 6 and all(len(r) == 6 for r in M)
    s = P.universal_point()
    assert M[3][0] == s and M[3][3] == s.ring.one - P.b * s


@pytest.mark.parametrize("field,a,b", SPECIALISATIONS)
def test_degree_two_invariants_are_twelve(field, a, b):
    P = GroupSchemeParams(field(a), field(b), field)
    assert invariant_dimension(P, 2) == 12
    assert product_span_dimension(P, 2) == 12


@pytest.mark.parametrize("field,a,b", SPECIALISATIONS)
def test_degree_four_generation(field, a, b):
    P = GroupSchemeParams(field(a), field(b), field)
    assert even_invariants_generated(P, 4)
    assert invariant_dimension(P, 4) == 66


def test_degree_six_generation_alpha2():
    P = GroupSchemeParams(F2(0), F2(0), F2)
    assert even_invariants_generated(P, 6)


def test_generation_degree_limits():
    P = GroupSchemeParams.for_group(F2, "mu2")
    with pytest.raises(ValueError):
        even_invariants_generated(P, 3)
    with pytest.raises(ValueError):
        even_invariants_generated(P, 8)


def _apply(M, v, S):
    return [sum((M[r][c] * v[c] for c in range(6)), S.zero) for r in range(6)]


@pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (0, 0)])
def test_fixed_planes_are_stable(a, b):
    """The image of a plane point under the universal point satisfies the plane's equations."""
    P = GroupSchemeParams(F2(a), F2(b), F2)
    s = P.universal_point()
    M = action_matrix(s, P)
    for name, eqs in fixed_planes(P).items():
        on_plane = [
            v for v in itertools.product(range(2), repeat=6)
            if any(v) and all(sum(int(r[c]) * v[c] for c in range(6)) % 2 == 0 for r in eqs)
        ]
        assert len(on_plane) == 7
        for v in on_plane:
            w = _apply(M, [F2(c) for c in v], s.ring)
            for r in eqs:
                assert sum((w[c] * r[c] for c in range(6)), s.ring.zero) == s.ring.zero, (name, v)


def test_y_zero_is_not_stable():
    P = GroupSchemeParams.for_group(F2, "etale2")
    s = P.universal_point()
    w = _apply(action_matrix(s, P), [F2(1), F2(0), F2(0), F2(0), F2(0), F2(0)], s.ring)
    assert w[3] == s  # leaves {y = 0}


def test_plus_plane_is_pointwise_fixed_for_mu2():
    P = GroupSchemeParams.for_group(F2, "mu2")
    s = P.universal_point()
    M = action_matrix(s, P)
    # v = (b y, y) maps to (b y, s b y + (1 - b s) y) = v
    for y in itertools.product(range(2), repeat=3):
        v = [P.b * c for c in y] + [F2(c) for c in y]
        assert _apply(M, v, s.ring) == [s.ring.coerce(c) for c in v]


def test_minus_plane_has_the_character():
    P = GroupSchemeParams.for_group(F2, "mu2")
    s = P.universal_point()
    M = action_matrix(s, P)
    chi = s.ring.one - P.b * s
    for r in range(3, 6):
        assert M[r][r] == chi
