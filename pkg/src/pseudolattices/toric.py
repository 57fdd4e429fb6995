"""Toric systems of exceptional bases and their rank-2 fans.

Indices follow the cyclic convention: ``lambdas[i - 1]`` is ``lambda_{i,i+1}``
for ``1 <= i <= n`` and every index is read modulo ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional

from . import linalg as la
from .errors import ConsistencyError, HypothesisError
from .exceptional import ExceptionalBasis, helix_element, is_locally_minimal
from .lattice import SurfaceStructure


def _frac_q(Q, x, y) -> Fraction:
    return sum(
        (x[i] * Q[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if x[i] and y[j]),
        Fraction(0),
    )


@dataclass(frozen=True)
class ToricSystem:
    lambdas: tuple  # n Fraction vectors in NS coordinates
    ranks: tuple
    form: tuple  # Gram matrix of q on NS
    locally_minimal: Optional[bool] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def r(self, i: int) -> int:
        return self.ranks[(i - 1) % self.n]

    def lam(self, i: int, j: int) -> tuple:
        """``lambda_{i,j}`` for ``i < j < i + n``."""
        if not i < j < i + self.n:
            raise IndexError("need i < j < i + n")
        m = len(self.form)
        out = [Fraction(0)] * m
        for k in range(i, j):
            v = self.lambdas[(k - 1) % self.n]
            out = [a + b for a, b in zip(out, v)]
        return tuple(out)

    def dot(self, x, y) -> Fraction:
        return _frac_q(self.form, x, y)

    def step_dot(self, i: int, j: int) -> Fraction:
        """``lambda_{i,i+1} . lambda_{j,j+1}``."""
        return self.dot(self.lambdas[(i - 1) % self.n], self.lambdas[(j - 1) % self.n])

    def scaled(self, i: int, j: int) -> tuple:
        """``r_i r_j lambda_{i,j}`` (rational; integral for a toric system)."""
        c = self.r(i) * self.r(j)
        return tuple(c * x for x in self.lam(i, j))

    def a(self, i: int, j: int) -> Fraction:
        v = self.scaled(i, j)
        return self.dot(v, v)

    def nval(self, i: int, j: int) -> Fraction:
        ri, rj = self.r(i), self.r(j)
        return (self.a(i, j) + ri * ri + rj * rj) / (ri * rj)

    def a_adjacent(self) -> tuple:
        """``(a_{1,2}, ..., a_{n,n+1})``."""
        return tuple(self.a(i, i + 1) for i in range(1, self.n + 1))

    def lambda_gram(self) -> tuple:
        return tuple(
            tuple(self.step_dot(i, j) for j in range(1, self.n + 1))
            for i in range(1, self.n + 1)
        )

    def with_lambdas(self, lambdas) -> "ToricSystem":
        return ToricSystem(tuple(tuple(Fraction(x) for x in v) for v in lambdas), self.ranks, self.form)


def _lambda_step(S: SurfaceStructure, e, f, re, rf) -> tuple:
    # e_{i+1}/r_{i+1} - e_i/r_i = lambda(e_i, e_{i+1}) / (r_i r_{i+1})
    v = tuple(re * y - rf * x for x, y in zip(e, f))
    return tuple(Fraction(x, re * rf) for x in S.project(v))


def toric_system_of(S: SurfaceStructure, basis: ExceptionalBasis, check: bool = True) -> ToricSystem:
    """Toric system of an exceptional basis with all ranks nonzero.

    With ``check`` set, ``n_{i,j} = chi(e_i, e_j)`` is verified on the helix
    and every axiom is checked; failures raise :class:`ConsistencyError`.
    """
    if not S.lattice.unimodular:
        raise HypothesisError("toric systems need a unimodular lattice")
    n = len(basis)
    helix = [helix_element(basis, k) for k in range(1, 2 * n)]
    rk = [S.rank_of(v) for v in helix]
    for i, r in enumerate(rk[:n]):
        if r == 0:
            raise HypothesisError(f"zero rank at {i + 1}")
    lambdas = tuple(
        _lambda_step(S, helix[i], helix[i + 1], rk[i], rk[i + 1]) for i in range(n)
    )
    minimal = is_locally_minimal(S, basis.vectors)
    ts = ToricSystem(lambdas, tuple(rk[:n]), S.ns_gram, minimal)
    if check:
        for i in range(1, n + 1):
            for j in range(i + 1, i + n):
                chi = S.lattice.chi(helix[i - 1], helix[j - 1])
                if ts.nval(i, j) != chi:
                    raise ConsistencyError(
                        f"n_{{{i},{j}}} = {ts.nval(i, j)} differs from chi = {chi}"
                    )
        rep = verify_toric_system(ts, S.canonical)
        if not rep.ok:
            raise ConsistencyError(f"axiom violation: {rep.failed()}")
    return ts


@dataclass(frozen=True)
class AxiomResult:
    ok: bool
    failures: tuple = ()  # offending index tuples


@dataclass(frozen=True)
class ToricReport:
    axioms: dict  # axiom number -> AxiomResult
    gamma: Optional[Fraction] = None
    chains_independent: bool = True
    extremal_pair: bool = True
    lambda_pattern: bool = True

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.axioms.values())

    def failed(self) -> list:
        return [k for k, r in self.axioms.items() if not r.ok]


def verify_toric_system(ts: ToricSystem, K) -> ToricReport:
    """Check axioms (1)-(6) of a toric system against the class ``K``.

    Also reports the Markov constant ``gamma`` for ``n = 3`` and the derived
    structural properties (independence of short chains, the extremal-pair
    restriction, and the cyclic tridiagonal shape of the lambda Gram matrix).
    """
    n = ts.n
    fails: dict = {k: [] for k in range(1, 7)}
    for i in range(1, n + 1):
        r = ts.r(i)
        if r == 0 or ts.step_dot(i - 1, i) != Fraction(1, r * r):
            fails[1].append((i,))
        for j in range(i + 1, i + n - 2):
            if ts.step_dot(i - 1, j) != 0:
                fails[2].append((i, j))
        for j in range(i + 1, i + n):
            if r == 0 or ts.r(j) == 0:
                fails[3].append((i, j))
                fails[4].append((i, j))
                continue
            v = ts.scaled(i, j)
            if any(x.denominator != 1 for x in v):
                fails[3].append((i, j))
            if ts.nval(i, j).denominator != 1:
                fails[4].append((i, j))
    total = ts.lam(1, n) if n > 1 else (Fraction(0),) * len(ts.form)
    total = tuple(a + b for a, b in zip(total, ts.lambdas[n - 1]))
    if any(t != -Fraction(k) for t, k in zip(total, K)):
        fails[5].append(())
    if la.vec_gcd(ts.ranks) != 1:
        fails[6].append(())
    axioms = {k: AxiomResult(not v, tuple(v)) for k, v in fails.items()}

    gamma = None
    if n == 3 and all(ts.ranks):
        r1, r2, r3 = ts.ranks
        gamma = Fraction(r1 * r1 + r2 * r2 + r3 * r3, r1 * r2 * r3)

    chains = True
    for i in range(n):
        for k in range(1, n - 1):
            rows = [ts.lambdas[(i + t) % n] for t in range(k)]
            if la.rank(rows) != k:
                chains = False

    pair_ok = True
    a = [ts.a(i, i + 1) if ts.r(i) and ts.r(i + 1) else None for i in range(1, n + 1)]
    for i in range(n):
        for j in range(i + 1, n):
            if (j - i) % n in (1, n - 1) or a[i] is None or a[j] is None:
                continue
            if a[i] >= 0 and a[j] >= 0:
                prop = la.rank([ts.lambdas[i], ts.lambdas[j]]) == 1
                if not (n == 4 and j - i == 2 and prop and a[i] == 0 and a[j] == 0):
                    pair_ok = False

    pattern = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = (j - i) % n
            val = ts.step_dot(i, j)
            if d == 0:
                continue
            if d == 1 and n > 2:
                pattern &= val == Fraction(1, ts.r(j) ** 2)
            elif d == n - 1 and n > 2:
                pattern &= val == Fraction(1, ts.r(i) ** 2)
            else:
                pattern &= val == 0
    return ToricReport(axioms, gamma, chains, pair_ok, pattern)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Fan:
    ells: tuple  # l_{i,i+1} in Z^2
    h: int
    orientation: int  # +1 if the kernel basis was kept, -1 if flipped
    system: ToricSystem = field(compare=False, repr=False)


def _canonical_frame(ells):
    """SL2(Z) change of coordinates: l_1 -> (d, 0), then l_2 sheared into [0, y)."""
    x, y = ells[0]
    d, u, v = la._xgcd(x, y)
    if d < 0:
        d, u, v = -d, -u, -v
    M = ((u, v), (-y // d, x // d))
    out = [la.matvec(M, l) for l in ells]
    if len(out) > 1 and out[1][1] > 0:
        a, b = out[1]
        t = -(a // b)
        out = [(p + t * q, q) for p, q in out]
    return tuple(tuple(l) for l in out)


def fan_of(ts: ToricSystem) -> Fan:
    n = ts.n
    m = len(ts.form)
    rows = []
    for k in range(m):
        col = [ts.lambdas[i][k] for i in range(n)]
        den = lcm(*(Fraction(c).denominator for c in col))
        rows.append(tuple(int(c * den) for c in col))
    ker = la.saturated_kernel(rows, n)
    if len(ker) != 2:
        raise ConsistencyError(f"kernel rank {len(ker)} != 2")
    ells = [(ker[0][i], ker[1][i]) for i in range(n)]
    orient = 1
    if _det(ells[-1], ells[0]) < 0:
        ells = [(x, -y) for x, y in ells]
        orient = -1
    ells = _canonical_frame(ells)
    hs = set()
    for i in range(n):
        d = _det(ells[i - 1], ells[i])
        hs.add(Fraction(d, ts.ranks[i] ** 2))
    if len(hs) != 1:
        raise ConsistencyError(f"h not constant: {sorted(hs)}")
    h = hs.pop()
    if h <= 0 or h.denominator != 1:
        raise ConsistencyError(f"h = {h} is not a positive integer")
    fan = Fan(ells, int(h), orient, ts)
    rep = verify_fan(fan)
    if not (rep.ell_relation and rep.det_relation and rep.a_det):
        raise ConsistencyError(f"fan relations fail: {rep}")
    return fan


@dataclass(frozen=True)
class FanReport:
    ell_relation: bool
    det_relation: bool
    a_det: bool  # det(l_{i+1,i+2}, l_{i-1,i}) = h a_{i,i+1}
    generates: bool
    adjacent_independent: bool
    h: int


def verify_fan(fan: Fan) -> FanReport:
    ts, L, n = fan.system, fan.ells, len(fan.ells)
    ell = det_rel = adet = True
    indep = True
    for i in range(n):
        prev, cur, nxt = L[i - 1], L[i], L[(i + 1) % n]
        ri, rj = ts.ranks[i], ts.ranks[(i + 1) % n]
        a = ts.a(i + 1, i + 2)
        for c in range(2):
            ell &= rj * rj * prev[c] + a * cur[c] + ri * ri * nxt[c] == 0
            det_rel &= (
                _det(cur, nxt) * prev[c] + _det(nxt, prev) * cur[c] + _det(prev, cur) * nxt[c] == 0
            )
        adet &= _det(nxt, prev) == fan.h * a
        indep &= _det(prev, cur) != 0
    minors = [_det(L[i], L[j]) for i in range(n) for j in range(i + 1, n)]
    return FanReport(ell, det_rel, adet, la.vec_gcd(minors) == 1, indep, fan.h)


def convex_hull(points) -> list:
    """Vertices of the convex hull in counterclockwise order (collinear points dropped)."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_triangle(p, a, b, c) -> bool:
    d1, d2, d3 = (
        _det((b[0] - a[0], b[1] - a[1]), (p[0] - a[0], p[1] - a[1])),
        _det((c[0] - b[0], c[1] - b[1]), (p[0] - b[0], p[1] - b[1])),
        _det((a[0] - c[0], a[1] - c[1]), (p[0] - c[0], p[1] - c[1])),
    )
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


@dataclass(frozen=True)
class NegativeCheck:
    index: int  # i with a_{i,i+1} < 0 (1-based)
    a: int
    contained: bool  # l_{i,i+1} in Conv(0, l_{i-1,i}, l_{i+1,i+2})
    guaranteed: bool  # a <= -(r_i^2 + r_{i+1}^2), the local-minimality bound


@dataclass(frozen=True)
class PolygonReport:
    vertices: tuple  # hull vertices, counterclockwise
    extremal: tuple  # 1-based indices i whose l_{i,i+1} is a vertex
    zero_interior: bool
    negatives: tuple
    source_locally_minimal: Optional[bool]

    @property
    def ok(self) -> bool:
        checks = all(c.contained for c in self.negatives) if self.source_locally_minimal else True
        return self.zero_interior and len(self.extremal) >= 3 and checks


def polygon_report(fan: Fan) -> PolygonReport:
    L, ts, n = fan.ells, fan.system, len(fan.ells)
    hull = convex_hull(L)
    verts = set(hull)
    extremal = tuple(i + 1 for i, l in enumerate(L) if l in verts)
    interior = len(hull) >= 3 and all(
        _det((hull[(k + 1) % len(hull)][0] - hull[k][0], hull[(k + 1) % len(hull)][1] - hull[k][1]),
             (-hull[k][0], -hull[k][1])) > 0
        for k in range(len(hull))
    )
    neg = []
    for i in range(n):
        a = ts.a(i + 1, i + 2)
        if a < 0:
            ri, rj = ts.ranks[i], ts.ranks[(i + 1) % n]
            neg.append(
                NegativeCheck(
                    i + 1,
                    int(a),
                    _in_triangle(L[i], (0, 0), L[i - 1], L[(i + 1) % n]),
                    a <= -(ri * ri + rj * rj),
                )
            )
    return PolygonReport(tuple(hull), extremal, interior, tuple(neg), ts.locally_minimal)


def fan_svg(fan: Fan, size: int = 320) -> str:
    """SVG picture of the rays, the polygon and its vertices."""
    L = fan.ells
    R = max(max(abs(x), abs(y)) for x, y in L) or 1
    s = (size / 2 - 20) / R
    c = size / 2

    def pt(v):
        return f"{c + s * v[0]:.2f},{c - s * v[1]:.2f}"

    hull = convex_hull(L)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<polygon points="{" ".join(pt(v) for v in hull)}" fill="#eef" stroke="#336" stroke-width="1.5"/>',
    ]
    for i, v in enumerate(L):
        parts.append(f'<line x1="{c}" y1="{c}" x2="{pt(v).split(",")[0]}" y2="{pt(v).split(",")[1]}" '
                     'stroke="#a33" stroke-width="1.2"/>')
        x, y = pt(v).split(",")
        parts.append(f'<text x="{x}" y="{y}" font-size="11" dx="4" dy="-4">{i + 1}</text>')
    for v in hull:
        x, y = pt(v).split(",")
        parts.append(f'<circle cx="{x}" cy="{y}" r="3.5" fill="#336"/>')
    parts.append(f'<circle cx="{c}" cy="{c}" r="2" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
