"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints (or Fractions where noted).
Vectors are plain tuples.  Every routine is exact; nothing here ever touches a
float, so entries may grow without bound.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple  # tuple[tuple[int, ...], ...]
Vector = tuple


class InconsistentSystemError(ValueError):
    """Raised by :func:`solve_rational` when ``A x = b`` has no solution."""


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def shape(M) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M) -> Matrix:
    return tuple(zip(*M))


def matmul(A, B) -> Matrix:
    Bt = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v) -> Vector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def bilinear(X, v, w):
    """``v^T X w``."""
    return sum(vi * sum(x * wj for x, wj in zip(row, w)) for vi, row in zip(v, X) if vi)


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def is_primitive(v) -> bool:
    return vec_gcd(v) == 1


def normalize_sign(v) -> Vector:
    """Flip ``v`` so that its first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def determinant(M) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _rref(rows):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    m, n = len(A), (len(A[0]) if A else 0)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(M) -> int:
    if not M:
        return 0
    return len(_rref(M)[1])


def inverse(M) -> Matrix:
    """Inverse over Q (entries are Fractions).  Raises ValueError if singular."""
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, piv = _rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(row[n:]) for row in R)


def integral_inverse(M) -> Matrix:
    inv = inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def solve_rational(A, b) -> Vector:
    """Exact solution of ``A x = b`` over Q.

    For underdetermined consistent systems the unique solution lying in the
    row space of ``A`` (the minimum-norm one) is returned.
    """
    A = as_matrix(A)
    m, n = shape(A)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    aug = [list(r) + [b[i]] for i, r in enumerate(A)]
    R, piv = _rref(aug)
    if n in piv:
        raise InconsistentSystemError("system has no rational solution")
    rows = [r[:n] for r in R[: len(piv)]]
    rhs = [r[n] for r in R[: len(piv)]]
    if not rows:
        return tuple(Fraction(0) for _ in range(n))
    # x = R^T y with (R R^T) y = rhs
    G = [[sum(a * c for a, c in zip(ri, rj)) for rj in rows] for ri in rows]
    Ginv = inverse(G)
    y = [sum(g * t for g, t in zip(row, rhs)) for row in Ginv]
    return tuple(sum(rows[k][j] * y[k] for k in range(len(rows))) for j in range(n))


def smith_normal_form(M) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U M V = D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    A = [list(r) for r in M]
    m, n = shape(M)
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def row_add(i, k, f):  # row_i += f * row_k
        A[i] = [x + f * y for x, y in zip(A[i], A[k])]
        U[i] = [x + f * y for x, y in zip(U[i], U[k])]

    def col_add(j, k, f):  # col_j += f * col_k
        for row in A:
            row[j] += f * row[k]
        for row in V:
            row[j] += f * row[k]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            row_swap(t, best[0])
            col_swap(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    row_add(i, t, -q)
                if A[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    col_add(j, t, -q)
                if A[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        if A[t][t] == 0:
            break
    return as_matrix(A), as_matrix(U), as_matrix(V)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(rows) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``; the result depends only on the lattice.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return ()
    n = len(A[0])
    r = 0
    for c in range(n):
        if r == len(A):
            break
        for i in range(r + 1, len(A)):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = _xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(ra, rb)]
            A[i] = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-u for u in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [u - q * v for u, v in zip(A[i], A[r])]
        r += 1
    return as_matrix(row for row in A[:r] if any(row))


def saturated_kernel(M, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{v in Z^n : M v = 0}``.

    The lattice is saturated by construction; the basis is put in Hermite
    normal form so the output is reproducible and each row has a positive
    leading coordinate.  ``ncols`` is needed only when ``M`` has no rows.
    """
    M = as_matrix(M)
    n = shape(M)[1] if M else ncols
    if n is None:
        raise ValueError("cannot infer the number of columns of an empty matrix")
    if not M:
        return identity(n)
    D, _, V = smith_normal_form(M)
    r = sum(1 for i in range(min(shape(D))) if D[i][i])
    basis = [tuple(V[i][j] for i in range(n)) for j in range(r, n)]
    return hermite_rows(basis)


def signature(Q) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` of a symmetric form by congruence."""
    A = [[Fraction(x) for x in r] for r in Q]
    n = len(A)
    if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
        raise ValueError("form is not symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if A[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i != j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # v_i += v_j makes the (i, i) entry 2 A[i][j] != 0
            for t in range(n):
                A[i][t] += A[j][t]
            for t in range(n):
                A[t][i] += A[t][j]
            k = i
        p = A[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            f = A[i][k] / p
            if f:
                for t in range(n):
                    A[i][t] -= f * A[k][t]
                for t in range(n):
                    A[t][i] -= f * A[t][k]
    return pos, neg, n - pos - neg


def extend_to_basis(v) -> Matrix:
    """Unimodular matrix whose first row is the primitive vector ``v``."""
    v = tuple(v)
    if not is_primitive(v):
        raise ValueError("vector is not primitive")
    D, U, V = smith_normal_form((v,))
    # U v V = (1, 0, ..., 0) with U = (+-1): v = U[0][0] * e_1^T V^{-1}
    Vinv = integral_inverse(V)
    first = tuple(U[0][0] * x for x in Vinv[0])
    return (first,) + Vinv[1:]


def solve_integral(row, target: int) -> Vector:
    """Some integer ``x`` with ``row . x = target``; ValueError if none exists."""
    g = vec_gcd(row)
    if g == 0 or target % g:
        raise ValueError("no integral solution")
    D, U, V = smith_normal_form((tuple(row),))
    # U row V = (g, 0, ...): row . (V e_1) = g / U
    col = tuple(V[i][0] for i in range(len(row)))
    f = target // (g * U[0][0])
    return tuple(f * x for x in col)


def to_ints(v) -> Vector:
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator != 1:
            raise ValueError("vector is not integral")
        out.append(int(x))
    return tuple(out)
