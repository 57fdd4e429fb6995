from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from pseudolattices import linalg as la


def _perm_det(M):
    # Leibniz expansion, an independent determinant for small matrices
    n = len(M)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = 1
        for i in range(n):
            term *= M[i][p[i]]
        total += -term if inv % 2 else term
    return total


def _determinantal_divisors(M):
    """Invariant factors from gcds of k x k minors."""
    m, n = len(M), len(M[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, _perm_det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


small_ints = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def test_snf_examples():
    D, U, V = la.smith_normal_form(((2, 4), (6, 8)))
    assert D == ((2, 0), (0, 4))
    assert _determinantal_divisors(((2, 4), (6, 8))) == [2, 4]
    assert la.smith_normal_form(la.identity(3))[0] == la.identity(3)
    assert la.smith_normal_form(((0,),))[0] == ((0,),)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_properties(M):
    M = la.as_matrix(M)
    D, U, V = la.smith_normal_form(M)
    assert la.matmul(la.matmul(U, M), V) == D
    assert abs(la.determinant(U)) == 1 and abs(la.determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == _determinantal_divisors(M)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-30, 30), min_size=8, max_size=8), min_size=8, max_size=8))
def test_snf_8x8(M):
    D, U, V = la.smith_normal_form(M)
    assert la.matmul(la.matmul(U, M), V) == D
    assert abs(la.determinant(U)) == 1 and abs(la.determinant(V)) == 1


def test_bareiss_matches_leibniz():
    M = ((3, -1, 4, 1), (5, 9, -2, 6), (5, 3, 5, -8), (9, 7, 9, 3))
    assert la.determinant(M) == _perm_det(M)


def test_kernel_examples():
    assert la.saturated_kernel(((1, 1, 1),)) == ((1, 0, -1), (0, 1, -1))
    assert la.saturated_kernel(((2, 2),)) == ((1, -1),)
    assert la.saturated_kernel(((2, 1), (1, 1))) == ()


@settings(max_examples=150, deadline=None)
@given(matrices(3, 5))
def test_kernel_properties(M):
    K = la.saturated_kernel(M)
    n = len(M[0])
    assert len(K) == n - la.rank(M)
    for row in K:
        assert all(x == 0 for x in la.matvec(M, row))
        first = next(x for x in row if x)
        assert first > 0
    if K:
        # saturation: the kernel basis spans a primitive sublattice
        D, _, _ = la.smith_normal_form(K)
        assert all(D[i][i] == 1 for i in range(len(K)))


def test_signature_examples():
    assert la.signature(((1,),)) == (1, 0, 0)
    assert la.signature(((0, 1), (1, 0))) == (1, 1, 0)
    assert la.signature(((0, 0), (0, 0))) == (0, 0, 2)
    with pytest.raises(ValueError):
        la.signature(((0, 1), (2, 0)))


def _jacobi_negatives(Q):
    # sign changes in 1, D1, ..., Dn (valid when all leading minors are nonzero)
    seq = [1] + [_perm_det([row[:k] for row in Q[:k]]) for k in range(1, len(Q) + 1)]
    if 0 in seq:
        return None
    return sum(1 for a, b in zip(seq, seq[1:]) if (a > 0) != (b > 0))


symmetric = st.integers(1, 5).flatmap(
    lambda n: st.lists(small_ints, min_size=n * n, max_size=n * n).map(
        lambda xs: tuple(tuple(xs[min(i, j) * n + max(i, j)] for j in range(n)) for i in range(n))
    )
)


@settings(max_examples=200, deadline=None)
@given(symmetric)
def test_signature_jacobi_oracle(Q):
    pos, neg, zero = la.signature(Q)
    assert pos + neg + zero == len(Q)
    assert zero == len(Q) - la.rank(Q)
    j = _jacobi_negatives(Q)
    if j is not None:
        assert neg == j


@settings(max_examples=100, deadline=None)
@given(symmetric, st.data())
def test_signature_congruence_invariant(Q, data):
    n = len(Q)
    P = data.draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n))
    if la.determinant(P) == 0:
        return
    Q2 = la.matmul(la.matmul(la.transpose(P), Q), P)
    assert la.signature(Q2) == la.signature(Q)


def test_solve_rational():
    x = la.solve_rational(((2, 0), (0, 3)), (1, 1))
    assert x == (Fraction(1, 2), Fraction(1, 3))
    with pytest.raises(la.InconsistentSystemError):
        la.solve_rational(((1, 1), (2, 2)), (1, 3))
    # underdetermined: minimum-norm solution
    assert la.solve_rational(((1, 1),), (2,)) == (1, 1)


@settings(max_examples=100, deadline=None)
@given(matrices(3, 4), st.data())
def test_solve_rational_consistent(M, data):
    x0 = data.draw(st.lists(small_ints, min_size=len(M[0]), max_size=len(M[0])))
    b = la.matvec(M, x0)
    x = la.solve_rational(M, b)
    assert la.matvec(M, x) == b


@settings(max_examples=100, deadline=None)
@given(st.lists(small_ints, min_size=1, max_size=5))
def test_extend_to_basis_and_solve_integral(v):
    g = la.vec_gcd(v)
    if g == 0:
        return
    p = tuple(x // g for x in v)
    E = la.extend_to_basis(p)
    assert E[0] == p and abs(la.determinant(E)) == 1
    x = la.solve_integral(v, 3 * g)
    assert la.dot(v, x) == 3 * g
    if g > 1:
        with pytest.raises(ValueError):
            la.solve_integral(v, g + 1)


def test_integral_inverse():
    M = ((2, 1), (1, 1))
    assert la.matmul(M, la.integral_inverse(M)) == la.identity(2)
    with pytest.raises(ValueError):
        la.integral_inverse(((2, 0), (0, 1)))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=1, max_size=4))
def test_hermite_rows_lattice_invariant(rows):
    H = la.hermite_rows(rows)
    # same row lattice: each side expressible in the other
    H2 = la.hermite_rows(list(rows) + list(H))
    assert H == H2
    assert len(H) == la.rank(rows)
