from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pseudolattices import linalg as la, models
from pseudolattices.errors import AmbiguousPoint, DefectUndefined, NotSurfaceLike
from pseudolattices.lattice import (
    Pseudolattice,
    SurfaceStructure,
    detect_surface_like,
    invariants_report,
    is_point_like,
    minimality,
    serre_operator,
    surface_structure,
)

from conftest import structure

ALL = [
    models.p2(),
    models.p1xp1(-2),
    models.p1xp1(0),
    models.p1xp1(3),
    models.f1(0),
    models.f1(2),
    models.blowup_p2(0),
    models.blowup_p2(2),
    models.blowup_p2(4),
    models.ruled_surface(0),
    models.ruled_surface(2),
    models.k3_mukai(),
    models.k3_mukai(((2, 1), (1, -2))),
]


def _canonical_oracle(S):
    """q(K, v) = -chi_-(w, v) / r(w) for v in p-perp, independent of the pair system."""
    L = S.lattice
    d = S.rank_index
    w = la.solve_integral(S._rho, d)
    rhs = [Fraction(-(L.chi(w, b) - L.chi(b, w)), d) for b in S.ns_basis]
    return la.solve_rational(S.ns_gram, rhs)


@pytest.mark.parametrize("m", ALL, ids=lambda m: m.lattice.name)
def test_structure_basics(m):
    S = SurfaceStructure(m.lattice, m.point)
    assert S.rank_of(m.point) == 0
    assert tuple(S.canonical) == tuple(_canonical_oracle(S))
    # NS form is symmetric and nondegenerate
    Q = S.ns_gram
    assert all(Q[i][j] == Q[j][i] for i in range(len(Q)) for j in range(len(Q)))
    assert la.determinant(Q) != 0
    # chi_-(v1, v2) = -q(K, lam(v1, v2)) on every basis pair
    n = S.n
    for i in range(n):
        for j in range(n):
            bi, bj = m.lattice.basis_vector(i), m.lattice.basis_vector(j)
            lhs = m.lattice.chi_minus[i][j]
            lb = S.lam_bar(bi, bj)
            assert lhs == -sum(x * y for x, y in zip(la.matvec(Q, lb), S.canonical))


RDS = [m for m in ALL if m.lattice.name.split("(")[0] not in ("P2", "P1xP1", "F1")]


@pytest.mark.parametrize("m", RDS, ids=lambda m: m.lattice.name)
def test_canonical_matches_model_data(m):
    # in (r, D, s) coordinates the D-part of the lifted K is the model's K
    S = SurfaceStructure(m.lattice, m.point)
    lifted = [sum(k * b[c] for k, b in zip(S.canonical, S.ns_basis)) for c in range(S.n)]
    assert tuple(lifted[1:-1]) == tuple(m.canonical)


def test_invariants_table():
    table = {
        "P2": (1, 9, 0),
        "P1xP1(-2)": (2, 8, 0),
        "P1xP1(0)": (2, 8, 0),
        "P1xP1(3)": (2, 8, 0),
        "F1(0)": (2, 8, 0),
        "F1(2)": (2, 8, 0),
        "BlowupP2(2)": (3, 7, 0),
        "RuledSurface(2)": (2, -8, -16),
    }
    for m in ALL:
        name = m.lattice.name
        if name not in table:
            continue
        S = SurfaceStructure(m.lattice, m.point)
        rep = invariants_report(S)
        assert (rep.ns_rank, rep.k_squared, rep.defect.defect) == table[name], name
        assert rep.unimodular and rep.geometric


def test_minimality_flags():
    assert minimality(structure(models.p2())[0]) == ("yes", None)
    assert minimality(structure(models.p1xp1(0))[0]) == ("yes", None)
    status, w = minimality(structure(models.f1(1))[0])
    S = structure(models.f1(1))[0]
    assert status == "no" and S.q(w, w) == -1
    # an odd indefinite form with no -1 inside a tiny box
    S = structure(models.custom_surface(((1, 0), (0, -3)), (1, 1), 1))[0]
    assert minimality(S, bound=10)[0] == "unknown"


def test_k3_is_not_unimodular():
    S = structure(models.k3_mukai())[0]
    assert S.lattice.is_symmetric
    assert S.lattice.chi(S.point, S.point) == 0
    assert not S.lattice.unimodular
    with pytest.raises(DefectUndefined):
        S.defect()
    assert invariants_report(S).defect is None


def test_detection_case_b():
    det = detect_surface_like(Pseudolattice(models.P2_GRAM))
    assert det.case == "b" and det.candidates == ((1, -2, 1),) and not det.family
    assert surface_structure(Pseudolattice(models.P2_GRAM)).point == (1, -2, 1)


def test_detection_case_a():
    det = detect_surface_like(models.k3_mukai().lattice, bound=2)
    assert det.case == "a"
    assert (0, 0, 1) in det.candidates
    assert all(models.k3_mukai().lattice.chi(c, c) == 0 for c in det.candidates)
    with pytest.raises(AmbiguousPoint):
        surface_structure(models.k3_mukai().lattice, bound=2)


def test_not_surface_like():
    # rank chi_- = 4 > 2
    X = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1), (0, 0, 0, 1))
    with pytest.raises(NotSurfaceLike):
        detect_surface_like(Pseudolattice(X))
    # definite symmetric form: no isotropic vectors at all
    with pytest.raises(NotSurfaceLike) as exc:
        detect_surface_like(Pseudolattice(la.identity(2)), bound=3)
    assert exc.value.inconclusive
    ok, why = is_point_like(Pseudolattice(((1,),)), (0,))
    assert not ok


def test_rejects_bad_gram():
    with pytest.raises(ValueError):
        Pseudolattice(((1, 2), (2, 4)))
    with pytest.raises(ValueError):
        Pseudolattice(((1, 2),))


def test_serre_p2():
    L = models.p2().lattice
    S = serre_operator(L)
    assert la.matvec(S, (0, 0, 1)) == (3, -3, 1)
    # chi(v, w) = chi(w, S v)
    for i in range(3):
        for j in range(3):
            v, w = L.basis_vector(i), L.basis_vector(j)
            assert L.chi(v, w) == L.chi(w, la.matvec(S, v))


@pytest.mark.parametrize("m", [m for m in ALL if m.lattice.unimodular], ids=lambda m: m.lattice.name)
def test_serre_unipotent(m):
    L = m.lattice
    S = serre_operator(L)
    n = L.rank
    N = tuple(tuple(int(i == j) - S[i][j] for j in range(n)) for i in range(n))
    assert la.matmul(la.matmul(N, N), N) == tuple((0,) * n for _ in range(n))
    assert la.matvec(S, m.point) == tuple(m.point)
    st_ = SurfaceStructure(L, m.point)
    for i in range(n):
        v = L.basis_vector(i)
        assert st_.rank_of(la.matvec(S, v)) == st_.rank_of(v)


@settings(max_examples=60, deadline=None)
@given(st.integers(-4, 4), st.integers(0, 3), st.integers(-3, 3))
def test_surface_model_identities(c, k, x):
    # chi((0,D,s),(0,D,s)) = -D^2 and the point is isotropic and central
    ns, K, chi0, _ = models.blowup_p2_data(k)
    L = models.surface_model(ns, K, chi0)
    m = len(ns)
    D = tuple((c + i * x) for i in range(m))
    v = (0,) + D + (x,)
    assert L.chi(v, v) == -la.bilinear(ns, D, D)
    p = (0,) * (m + 1) + (1,)
    assert L.chi(p, p) == 0
    for i in range(L.rank):
        b = L.basis_vector(i)
        assert L.chi(p, b) == L.chi(b, p)
