"""Pseudolattices and their surface-like structures.

A pseudolattice is stored through its Gram matrix ``X`` with
``chi(v, w) = v^T X w`` for integer coordinate columns ``v`` and ``w``.
A :class:`SurfaceStructure` adds a point-like element and derives from it the
rank function, the Neron-Severi lattice ``(NS, q)`` with ``q = -chi`` on
``p^perp / p``, and the canonical class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional

from . import linalg as la
from .errors import AmbiguousPoint, DefectUndefined, NotSurfaceLike


@dataclass(frozen=True)
class Pseudolattice:
    gram: tuple
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        gram = la.as_matrix(self.gram)
        n, m = la.shape(gram)
        if n != m or n == 0:
            raise ValueError("Gram matrix must be square and nonempty")
        if any(not isinstance(x, int) or isinstance(x, bool) for row in gram for x in row):
            raise TypeError("Gram matrix entries must be integers")
        object.__setattr__(self, "gram", gram)
        if self.det == 0:
            raise ValueError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return la.determinant(self.gram)

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    def chi(self, v, w) -> int:
        return la.bilinear(self.gram, v, w)

    @cached_property
    def chi_minus(self):
        X = self.gram
        n = self.rank
        return tuple(tuple(X[i][j] - X[j][i] for j in range(n)) for i in range(n))

    @cached_property
    def chi_plus(self):
        X = self.gram
        n = self.rank
        return tuple(tuple(X[i][j] + X[j][i] for j in range(n)) for i in range(n))

    @property
    def is_symmetric(self) -> bool:
        return not any(any(row) for row in self.chi_minus)

    def basis_vector(self, i: int):
        return tuple(int(j == i) for j in range(self.rank))

    @cached_property
    def serre(self):
        return serre_operator(self)


def serre_operator(L: Pseudolattice):
    """Matrix ``S = X^{-1} X^T`` satisfying ``chi(v, w) = chi(w, S v)``.

    Returns None when ``S`` is not integral.
    """
    Xinv = la.inverse(L.gram)
    S = la.matmul(Xinv, la.transpose(L.gram))
    if any(x.denominator != 1 for row in S for x in row):
        return None
    return tuple(tuple(int(x) for x in row) for row in S)


def is_point_like(L: Pseudolattice, p) -> tuple[bool, str]:
    """Check the three surface-like axioms for ``p`` directly.

    Returns ``(ok, reason)``; ``reason`` names the first failed condition.
    """
    p = tuple(p)
    if len(p) != L.rank:
        return False, "point has the wrong length"
    if not la.is_primitive(p):
        return False, "point is not primitive"
    if L.chi(p, p) != 0:
        return False, "chi(p, p) != 0"
    if any(la.matvec(L.chi_minus, p)):
        return False, "chi_-(p, -) does not vanish"
    rho = la.matvec(la.transpose(L.gram), p)
    perp = la.saturated_kernel((rho,))
    if any(la.bilinear(L.chi_minus, u, w) for u in perp for w in perp):
        return False, "chi is not symmetric on p-perp"
    return True, ""


@dataclass(frozen=True)
class Detection:
    """Outcome of :func:`detect_surface_like`.

    ``case`` is ``"a"`` (symmetric form) or ``"b"`` (skew part of rank 2).
    When ``family`` is set the candidates are a basis of a rank >= 2 kernel,
    and any primitive vector in their span is point-like; no choice is made.
    """

    case: str
    candidates: tuple
    family: bool = False


def _box(n: int, bound: int) -> Iterator[tuple]:
    # sign-normalized vectors, by increasing sup-norm
    for radius in range(1, bound + 1):
        for v in itertools.product(range(-radius, radius + 1), repeat=n):
            if max(map(abs, v)) != radius:
                continue
            first = next(x for x in v if x)
            if first > 0:
                yield v


def detect_surface_like(L: Pseudolattice, bound: int = 10) -> Detection:
    r = la.rank(L.chi_minus)
    if r == 0:
        found = tuple(
            v for v in _box(L.rank, bound) if la.is_primitive(v) and L.chi(v, v) == 0
        )
        if not found:
            raise NotSurfaceLike(
                f"chi is symmetric and has no isotropic vector with |x| <= {bound} "
                "(inconclusive at bound)",
                inconclusive=True,
            )
        return Detection("a", found, family=len(found) > 1)
    if r != 2:
        raise NotSurfaceLike(f"rank of chi_- is {r}, not 0 or 2")
    B = la.saturated_kernel(L.chi_minus)
    C = la.matmul(la.matmul(B, L.gram), la.transpose(B))
    K0 = la.saturated_kernel(C, ncols=len(B))
    if not K0:
        raise NotSurfaceLike("restriction of chi to Ker chi_- is nondegenerate")
    cands = tuple(
        la.normalize_sign(la.matvec(la.transpose(B), c)) for c in K0
    )
    for c in cands:
        ok, why = is_point_like(L, c)
        if not ok:  # pragma: no cover - guaranteed by the criterion
            raise NotSurfaceLike(f"candidate {c} fails re-verification: {why}")
    return Detection("b", cands, family=len(cands) > 1)


class SurfaceStructure:
    """A pseudolattice with a chosen point-like element.

    NS coordinates are taken with respect to :attr:`ns_basis`, a list of
    lifts in ``p^perp``; together with ``p`` and one complementary vector
    they form a unimodular basis of the ambient lattice, which makes the
    projection to NS a single integer matrix.
    """

    def __init__(self, lattice: Pseudolattice, point):
        point = tuple(point)
        ok, why = is_point_like(lattice, point)
        if not ok:
            raise NotSurfaceLike(f"{point} is not point-like: {why}")
        self.lattice = lattice
        self.point = point
        n = lattice.rank
        self._rho = la.matvec(la.transpose(lattice.gram), point)
        perp = la.saturated_kernel((self._rho,))
        # coordinates of p in the p-perp basis, then a basis of p-perp starting with p
        c = la.to_ints(la.solve_rational(la.transpose(perp), point))
        E = la.extend_to_basis(c)
        self.ns_basis = tuple(la.matvec(la.transpose(perp), row) for row in E[1:])
        d = la.vec_gcd(self._rho)
        w = la.solve_integral(self._rho, d)
        frame = la.transpose(self.ns_basis + (point, w))
        self._frame_inv = la.integral_inverse(frame)
        self.rank_index = d
        m = n - 2
        self.ns_gram = tuple(
            tuple(-lattice.chi(self.ns_basis[i], self.ns_basis[j]) for j in range(m))
            for i in range(m)
        )

    def __repr__(self):
        name = self.lattice.name or "pseudolattice"
        return f"SurfaceStructure({name}, rank={self.lattice.rank}, point={self.point})"

    @property
    def n(self) -> int:
        return self.lattice.rank

    @property
    def ns_rank(self) -> int:
        return self.n - 2

    def rank_of(self, v):
        return sum(a * b for a, b in zip(self._rho, v))

    def chi(self, v, w):
        return self.lattice.chi(v, w)

    def project(self, v) -> tuple:
        """NS coordinates of a (possibly rational) vector in ``p^perp``."""
        c = la.matvec(self._frame_inv, v)
        if c[-1] != 0:
            raise ValueError("vector is not in p-perp")
        return tuple(c[: self.ns_rank])

    def lift(self, ns_coords) -> tuple:
        """A preimage in ``p^perp`` of the given NS coordinates."""
        n = self.n
        return tuple(
            sum(x * b[k] for x, b in zip(ns_coords, self.ns_basis)) for k in range(n)
        )

    def q(self, x, y):
        return la.bilinear(self.ns_gram, x, y)

    def lam(self, v1, v2) -> tuple:
        """``r(v1) v2 - r(v2) v1`` as a vector of the ambient lattice."""
        r1, r2 = self.rank_of(v1), self.rank_of(v2)
        return tuple(r1 * b - r2 * a for a, b in zip(v1, v2))

    def lam_bar(self, v1, v2) -> tuple:
        return self.project(self.lam(v1, v2))

    @cached_property
    def canonical(self) -> tuple:
        """``K`` in NS coordinates, solving ``chi_-(b_i, b_j) = -q(K, lam(b_i, b_j))``."""
        L = self.lattice
        Q = self.ns_gram
        rows, rhs = [], []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                lb = self.lam_bar(L.basis_vector(i), L.basis_vector(j))
                rows.append(tuple(-x for x in la.matvec(Q, lb)))
                rhs.append(L.chi_minus[i][j])
        K = la.solve_rational(rows, rhs)
        return tuple(Fraction(x) for x in K)

    @property
    def canonical_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.canonical)

    @property
    def k_squared(self) -> Fraction:
        return Fraction(self.q(self.canonical, self.canonical))

    @cached_property
    def ns_signature(self):
        return la.signature(self.ns_gram)

    @property
    def ns_even(self) -> bool:
        return all(self.ns_gram[i][i] % 2 == 0 for i in range(self.ns_rank))

    @property
    def geometric(self) -> bool:
        if not self.canonical_integral:
            return False
        if self.ns_signature != (1, self.ns_rank - 1, 0):
            return False
        K = la.to_ints(self.canonical)
        return all(
            (self.ns_gram[i][i] - la.dot(self.ns_gram[i], K)) % 2 == 0
            for i in range(self.ns_rank)
        )

    def defect(self) -> int:
        if not self.lattice.unimodular:
            raise DefectUndefined("defect is only defined for unimodular lattices")
        return int(self.k_squared) + self.ns_rank - 10


def rank_of(S: SurfaceStructure, v) -> int:
    return S.rank_of(v)


def neron_severi(S: SurfaceStructure):
    """``(ns_gram, ns_basis, projection)`` of a surface-like structure."""
    return S.ns_gram, S.ns_basis, S.project


def canonical_class(S: SurfaceStructure) -> tuple[tuple, bool]:
    return S.canonical, S.canonical_integral


def find_minus_one(S: SurfaceStructure, bound: int = 10):
    """First NS vector with ``q(v, v) = -1`` by increasing sup-norm, or None."""
    Q = S.ns_gram
    for v in _box(S.ns_rank, bound):
        if la.bilinear(Q, v, v) == -1:
            return v
    return None


def minimality(S: SurfaceStructure, bound: int = 10) -> tuple[str, Optional[tuple]]:
    """Decide whether ``q`` represents -1.

    Returns ``("no", witness)``, ``("yes", None)`` when a proof is available
    (positive semidefinite or even form), or ``("unknown", None)``.
    """
    pos, neg, zero = S.ns_signature
    if neg == 0 or S.ns_even:
        return "yes", None
    w = find_minus_one(S, bound)
    if w is not None:
        return "no", w
    return "unknown", None


@dataclass(frozen=True)
class DefectReport:
    k_squared: int
    ns_rank: int
    defect: int


@dataclass(frozen=True)
class InvariantsReport:
    ns_rank: int
    ns_gram: tuple
    canonical: tuple
    canonical_integral: bool
    k_squared: Fraction
    signature: tuple
    unimodular: bool
    geometric: bool
    minimal: str
    minimal_witness: Optional[tuple]
    defect: Optional[DefectReport]


def invariants_report(S: SurfaceStructure, bound: int = 10) -> InvariantsReport:
    minimal, witness = minimality(S, bound)
    defect = None
    if S.lattice.unimodular:
        defect = DefectReport(int(S.k_squared), S.ns_rank, S.defect())
    return InvariantsReport(
        ns_rank=S.ns_rank,
        ns_gram=S.ns_gram,
        canonical=S.canonical,
        canonical_integral=S.canonical_integral,
        k_squared=S.k_squared,
        signature=S.ns_signature,
        unimodular=S.lattice.unimodular,
        geometric=S.geometric,
        minimal=minimal,
        minimal_witness=witness,
        defect=defect,
    )


def surface_structure(L: Pseudolattice, point=None, bound: int = 10) -> SurfaceStructure:
    """Build a structure, detecting the point when it is uniquely determined."""
    if point is not None:
        return SurfaceStructure(L, point)
    det = detect_surface_like(L, bound)
    if det.family or len(det.candidates) != 1:
        raise AmbiguousPoint(
            "point-like element is not unique; candidates: "
            + ", ".join(str(c) for c in det.candidates),
            det.candidates,
        )
    return SurfaceStructure(L, det.candidates[0])
