import random
import pytest
from hypothesis import given, settings, strategies as st

from pseudolattices import linalg as la, models
from pseudolattices.errors import HypothesisError
from pseudolattices.exceptional import apply_word, is_locally_minimal, mutate_basis
from pseudolattices.toric import (
    ToricSystem,
    convex_hull,
    fan_of,
    fan_svg,
    polygon_report,
    toric_system_of,
    verify_fan,
    verify_toric_system,
)

from conftest import BASIS_MODELS, random_word, structure


def system(model):
    S, B = structure(model)
    return S, toric_system_of(S, B)


def test_p2_system():
    S, ts = system(models.p2())
    H = tuple(-x / 3 for x in S.canonical)  # -K/3 is the hyperplane class
    assert S.q(H, H) == 1
    assert ts.lambdas == (H, H, H)
    assert ts.ranks == (1, 1, 1)
    assert ts.a_adjacent() == (1, 1, 1)
    rep = verify_toric_system(ts, S.canonical)
    assert rep.ok and rep.gamma == 3
    assert rep.chains_independent and rep.extremal_pair and rep.lambda_pattern


def test_p2_fan():
    _, ts = system(models.p2())
    fan = fan_of(ts)
    assert fan.h == 1
    assert fan.ells == ((1, 0), (0, 1), (-1, -1))
    assert tuple(map(sum, zip(*fan.ells))) == (0, 0)
    rep = verify_fan(fan)
    assert rep.ell_relation and rep.det_relation and rep.a_det and rep.generates
    poly = polygon_report(fan)
    assert poly.ok and poly.extremal == (1, 2, 3) and poly.zero_interior


def test_p1xp1_system():
    S, ts = system(models.p1xp1(0))
    l1, l2, l3, l4 = ts.lambdas
    # lambda_12 = lambda_34 = f, lambda_23 = s + c'f, lambda_41 = s + c''f
    assert l1 == l3 and S.q(l1, l1) == 0
    assert S.q(l1, l2) == 1 and S.q(l2, l3) == 1
    total = tuple(map(sum, zip(*ts.lambdas)))
    assert total == tuple(-k for k in S.canonical)
    assert ts.a_adjacent() == (0, -2, 0, 2)
    rep = verify_toric_system(ts, S.canonical)
    assert rep.ok and rep.gamma is None


@pytest.mark.parametrize("c", [0, 1])
def test_p1xp1_fan_battery(c):
    _, ts = system(models.p1xp1(c))
    fan = fan_of(ts)
    rep = verify_fan(fan)
    assert rep.ell_relation and rep.det_relation and rep.a_det and rep.generates
    assert rep.adjacent_independent and fan.h == 1
    poly = polygon_report(fan)
    assert poly.ok and len(poly.extremal) >= 3


def test_p1xp1_zero_a_gives_opposite_rays():
    _, ts = system(models.p1xp1(1))
    assert ts.a_adjacent() == (0, 0, 0, 0)
    L = fan_of(ts).ells
    assert L[0] == tuple(-x for x in L[2]) and L[1] == tuple(-x for x in L[3])
    assert polygon_report(fan_of(ts)).extremal == (1, 2, 3, 4)
    # with c = 0 only a_12 = a_34 = 0; a_23 = -2 puts l_23 at the midpoint
    _, ts = system(models.p1xp1(0))
    L = fan_of(ts).ells
    assert L[3] == tuple(-x for x in L[1])
    assert 2 * L[1][0] == L[0][0] + L[2][0] and 2 * L[1][1] == L[0][1] + L[2][1]
    assert polygon_report(fan_of(ts)).extremal == (1, 3, 4)


def test_scaled_lambda_breaks_sum_axiom():
    S, ts = system(models.p2())
    bad = ts.with_lambdas([tuple(2 * x for x in v) for v in ts.lambdas])
    rep = verify_toric_system(bad, S.canonical)
    assert 5 in rep.failed()


def test_rank_112_candidate():
    S, ts = system(models.p2())
    bad = ToricSystem(ts.lambdas, (1, 1, 2), ts.form)
    rep = verify_toric_system(bad, S.canonical)
    assert 1 in rep.failed() and 4 in rep.failed()
    assert rep.axioms[1].failures
    # the ranks alone do satisfy the Markov equation: 1 + 1 + 4 = 3 * 1 * 1 * 2
    assert rep.gamma == 3


def test_gcd_axiom():
    S, ts = system(models.p2())
    rep = verify_toric_system(ToricSystem(ts.lambdas, (2, 2, 2), ts.form), S.canonical)
    assert 6 in rep.failed()


def test_round_trip_mutation():
    S, B = structure(models.p2())
    back = mutate_basis(mutate_basis(B, 1, "L"), 1, "R")
    assert toric_system_of(S, back) == toric_system_of(S, B)


def test_zero_rank_rejected():
    S, B = structure(models.f1(1))
    with pytest.raises(HypothesisError, match="zero rank at 2"):
        toric_system_of(S, apply_word(B, "L2"))


def test_local_minimality_is_cyclic():
    # F1(2): the only negative a sits on the wraparound pair (e_4, S^-1 e_1)
    S, B = structure(models.f1(2))
    ts = toric_system_of(S, B)
    assert ts.a_adjacent()[3] == -1
    assert not ts.locally_minimal
    assert is_locally_minimal(S, B.vectors, cyclic=False)


def test_non_minimal_f1_negative_entries():
    S, B = structure(models.f1(1))
    ts = toric_system_of(S, B)
    assert ts.locally_minimal is False
    (neg,) = polygon_report(fan_of(ts)).negatives
    assert (neg.index, neg.a, neg.contained) == (2, -1, False)
    # a non-minimal basis can still satisfy the containment
    ts = toric_system_of(S, apply_word(B, "L1,L1,L2"))
    assert not ts.locally_minimal
    poly = polygon_report(fan_of(ts))
    assert [(c.index, c.a, c.contained) for c in poly.negatives] == [(1, -5, False), (4, -3, True)]


def test_minimal_f1_containment():
    S, B = structure(models.f1(0))
    ts = toric_system_of(S, B)
    assert ts.locally_minimal
    poly = polygon_report(fan_of(ts))
    assert poly.ok
    assert [(c.index, c.a, c.contained, c.guaranteed) for c in poly.negatives] == [(2, -3, True, True)]


def test_convex_hull():
    pts = [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2), (1, 0)]
    assert convex_hull(pts) == [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert convex_hull([(1, 1)]) == [(1, 1)]


def test_svg_smoke():
    _, ts = system(models.p1xp1(1))
    svg = fan_svg(fan_of(ts))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<line") == 4 and "<polygon" in svg


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["P2", "P1xP1(0)", "F1(1)", "BlowupP2(1)", "BlowupP2(2)"]))
def test_toric_properties(seed, name):
    S, B = structure(BASIS_MODELS[name]())
    b = apply_word(B, random_word(random.Random(seed), len(B), 8))
    if 0 in [S.rank_of(v) for v in b.vectors]:
        return
    ts = toric_system_of(S, b)  # checks n_ij = chi and the axioms
    rep = verify_toric_system(ts, S.canonical)
    assert rep.ok and rep.chains_independent and rep.extremal_pair and rep.lambda_pattern
    assert ts.lambda_gram() == tuple(map(tuple, la.transpose(ts.lambda_gram())))
    fan = fan_of(ts)
    frep = verify_fan(fan)
    assert frep.ell_relation and frep.det_relation and frep.a_det
    assert frep.generates and frep.adjacent_independent and frep.h >= 1
    poly = polygon_report(fan)
    assert poly.zero_interior and len(poly.extremal) >= 3
    for i, a in enumerate(ts.a_adjacent(), start=1):
        if a == 0:
            n = ts.n
            assert fan.ells[(i - 2) % n] == tuple(-x for x in fan.ells[i % n])
    if ts.locally_minimal:
        assert poly.ok
        for i, a in enumerate(ts.a_adjacent(), start=1):
            ri, rj = ts.r(i), ts.r(i + 1)
            assert a >= abs(ri * ri - rj * rj) or a <= -(ri * ri + rj * rj)
