"""Contractions, minimal models, classification of minimal lattices and the
numerical criterion for exceptional bases."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import linalg as la
from .errors import ConsistencyError, HypothesisError, NotExceptional
from .exceptional import (
    ExceptionalBasis,
    MutationWord,
    Step,
    _apply_step,
    is_exceptional_sequence,
    norm_minimize,
    reduce_to_01,
)
from .lattice import Pseudolattice, SurfaceStructure, find_minus_one, minimality
from .models import P2_GRAM, p1xp1_gram, f1_gram

STATUS_MINIMAL = "minimal"
STATUS_UNKNOWN = "bound exhausted, minimality unknown"


@dataclass(frozen=True)
class ContractionStep:
    e: tuple  # contracted vector, coordinates of the lattice before the step
    basis_change: tuple  # rows: basis of e-perp in the old coordinates
    gram_after: tuple
    k_dot_e: int
    defect_before: Optional[int] = None
    defect_after: Optional[int] = None
    k_squared_before: Fraction = Fraction(0)
    k_squared_after: Fraction = Fraction(0)


def _contraction_checks(S: SurfaceStructure, S2: SurfaceStructure, B, e) -> int:
    """Verify the contraction identities; returns ``K.e``."""
    e_bar = S.project(e)
    if S.q(e_bar, e_bar) != -1:
        raise ConsistencyError("contracted class does not have square -1")
    K = S.canonical
    ke = sum(x * y for x, y in zip(la.matvec(S.ns_gram, e_bar), K))
    if Fraction(ke).denominator != 1:
        raise ConsistencyError("K.e is not an integer")
    ke = int(ke)
    # NS(G_e) inside NS(G)
    Bt = la.transpose(B)
    img = [S.project(la.matvec(Bt, b)) for b in S2.ns_basis]
    if any(S.q(v, e_bar) for v in img):
        raise ConsistencyError("NS(G_e) is not orthogonal to e")
    if abs(la.determinant(tuple(img) + (e_bar,))) != 1:
        raise ConsistencyError("NS(G) is not NS(G_e) + Ze")
    for i in range(S2.ns_rank):
        for j in range(S2.ns_rank):
            if S.q(img[i], img[j]) != S2.ns_gram[i][j]:
                raise ConsistencyError("NS form not restricted correctly")
    K2 = S2.canonical
    lhs = tuple(
        sum((K2[k] * img[k][c] for k in range(S2.ns_rank)), Fraction(0)) - ke * e_bar[c]
        for c in range(S.ns_rank)
    )
    if lhs != tuple(K):
        raise ConsistencyError("K_G != K_{G_e} + (-K.e) e")
    if ke % 2 == 0 and S.geometric:
        raise ConsistencyError("K.e is even on a geometric lattice")
    if S.k_squared != S2.k_squared - ke * ke:
        raise ConsistencyError("K^2 does not drop by (K.e)^2")
    if S.lattice.unimodular and not S2.lattice.unimodular:
        raise ConsistencyError("unimodularity not inherited")
    if S.geometric and not S2.geometric:
        raise ConsistencyError("geometricity not inherited")
    return ke


def contract(S: SurfaceStructure, e) -> tuple[SurfaceStructure, ContractionStep]:
    """Pass to the right orthogonal ``e^perp`` of a rank-zero exceptional vector."""
    e = tuple(e)
    L = S.lattice
    if S.rank_of(e) != 0 or L.chi(e, e) != 1:
        raise NotExceptional("not rank-0 exceptional")
    n = L.rank
    images = []
    for i in range(n):
        b = L.basis_vector(i)
        c = L.chi(e, b)
        images.append(tuple(x - c * y for x, y in zip(b, e)))
    B = la.hermite_rows(images)
    if len(B) != n - 1:
        raise ConsistencyError("e-perp does not have rank n - 1")
    X = la.matmul(la.matmul(B, L.gram), la.transpose(B))
    p = la.to_ints(la.solve_rational(la.transpose(B), S.point))
    name = f"{L.name}/e" if L.name else None
    S2 = SurfaceStructure(Pseudolattice(X, name=name), p)
    ke = _contraction_checks(S, S2, B, e)
    d1 = d2 = None
    if L.unimodular:
        d1, d2 = S.defect(), S2.defect()
        if d1 != d2 + 1 - ke * ke:
            raise ConsistencyError("defect formula fails")
    step = ContractionStep(e, B, X, ke, d1, d2, S.k_squared, S2.k_squared)
    return S2, step


def _to_new_coords(B, v) -> tuple:
    return la.to_ints(la.solve_rational(la.transpose(B), v))


@dataclass
class MMPResult:
    steps: list
    final: SurfaceStructure
    status: str
    basis: Optional[ExceptionalBasis] = None  # surviving basis in the final lattice
    word: MutationWord = field(default_factory=MutationWord)


def minimal_model(S: SurfaceStructure, basis: Optional[ExceptionalBasis] = None, bound: int = 10) -> MMPResult:
    """Contract rank-zero exceptional vectors until the lattice is minimal.

    With a basis the leading rank-zero vectors of its 0/1 reduction are
    contracted in order, carrying the rest of the basis along.  Without one
    (or once the basis is used up) NS is searched for classes of square -1
    with coordinates bounded by ``bound``.
    """
    steps: list = []
    word = MutationWord()
    cur = S
    vecs = None
    if basis is not None:
        b01, word, k = reduce_to_01(S, basis)
        vecs = list(b01.vectors)
        while vecs and cur.rank_of(vecs[0]) == 0:
            e = vecs.pop(0)
            nxt, step = contract(cur, e)
            # L_e maps the left orthogonal of e isometrically onto e-perp
            mapped = []
            for v in vecs:
                c = cur.lattice.chi(e, v)
                mapped.append(_to_new_coords(step.basis_change, tuple(x - c * y for x, y in zip(v, e))))
            chk = is_exceptional_sequence(nxt.lattice, mapped)
            if not chk.ok:
                raise ConsistencyError(f"surviving vectors not exceptional at {chk.failure}")
            steps.append(step)
            cur, vecs = nxt, mapped
    while True:
        status, witness = minimality(cur, bound)
        if status == "yes":
            break
        if status == "unknown":
            return MMPResult(steps, cur, STATUS_UNKNOWN, _basis_or_none(cur, vecs), word)
        e = cur.lift(witness)
        cur, step = contract(cur, e)
        steps.append(step)
        vecs = None
    return MMPResult(steps, cur, STATUS_MINIMAL, _basis_or_none(cur, vecs), word)


def _basis_or_none(S, vecs):
    if vecs is None or len(vecs) != S.n:
        return None
    return ExceptionalBasis(S.lattice, tuple(vecs))


@dataclass(frozen=True)
class Classification:
    kind: str  # "P2", "P1xP1" or "unknown"
    c: Optional[int]  # original shift parameter for P1xP1
    basis: Optional[ExceptionalBasis]
    word: MutationWord
    gram: tuple
    k_squared: int  # 12 - n
    diagnostics: str = ""


def _rotate(S, vecs, steps):
    # (e_1, ..., e_n) -> (e_2, ..., e_n, S^{-1} e_1) via R_1, ..., R_{n-1}
    for i in range(1, len(vecs)):
        step = Step("R", i)
        vecs = _apply_step(S.lattice, vecs, step)
        steps.append(step)
    return vecs


def _p1xp1_shift(X) -> Optional[int]:
    if X[1][2] % 2:
        return None
    c = X[1][2] // 2
    return c if X == p1xp1_gram(c) else None


def _is_f1(X) -> bool:
    if X[1][2] % 2 == 0:
        return False
    c = (X[1][2] + 1) // 2
    return X == f1_gram(c)


def _gram(L, vecs):
    return tuple(tuple(L.chi(u, v) for v in vecs) for u in vecs)


def classify_minimal(S: SurfaceStructure, basis: ExceptionalBasis) -> Classification:
    """Identify a norm-minimal basis with the plane or the quadric by its Gram matrix."""
    if not S.geometric:
        raise HypothesisError("geometricity required")
    L = S.lattice
    res = norm_minimize(S, basis)
    vecs = list(res.basis.vectors)
    steps = list(res.word.steps)
    rk = [S.rank_of(v) for v in vecs]
    if 0 in rk:
        raise HypothesisError("ranks not all nonzero after minimization; contract first")
    for i, r in enumerate(rk):
        if r < 0:
            step = Step("F", i + 1)
            vecs = _apply_step(L, vecs, step)
            steps.append(step)
    n = len(vecs)
    k2 = 12 - n
    if S.k_squared != k2:
        diag = f"K^2 = {S.k_squared} but a norm-minimal basis of length {n} needs {k2}"
        return Classification("unknown", None, None, MutationWord(tuple(steps)), _gram(L, vecs), k2, diag)
    diag = f"length {n} with ranks {tuple(S.rank_of(v) for v in vecs)}"
    for _ in range(max(n, 1)):
        X = _gram(L, vecs)
        if n == 3 and X == P2_GRAM:
            return Classification("P2", None, ExceptionalBasis(L, tuple(vecs)), MutationWord(tuple(steps)), X, k2)
        if n == 4:
            c = _p1xp1_shift(X)
            if c is not None:
                vecs, steps = _normalize_shift(L, vecs, steps, c)
                X = _gram(L, vecs)
                return Classification(
                    "P1xP1", c, ExceptionalBasis(L, tuple(vecs)), MutationWord(tuple(steps)), X, k2
                )
            if _is_f1(X):
                diag = "F1 pattern: this basis has a rank-zero mutation, so it is not norm-minimal"
        vecs = _rotate(S, vecs, steps)
    return Classification("unknown", None, None, MutationWord(tuple(steps)), _gram(L, vecs), k2, diag)


def _normalize_shift(L, vecs, steps, c):
    # L3,F3 turns the P1xP1(c) pattern into P1xP1(c-1); R3,F4 into P1xP1(c+1)
    while c != 0:
        word = (Step("L", 3), Step("F", 3)) if c > 0 else (Step("R", 3), Step("F", 4))
        for st in word:
            vecs = _apply_step(L, vecs, st)
            steps.append(st)
        c += -1 if c > 0 else 1
        if _gram(L, vecs) != p1xp1_gram(c):
            raise ConsistencyError(f"shift normalization left the P1xP1 pattern at c = {c}")
    return vecs, steps


CASES = {1: "P2-case", 2: "P1xP1-case", 3: "blowup-case", None: "none"}


@dataclass(frozen=True)
class CriterionVerdict:
    case: str
    number: Optional[int]
    witnesses: dict


def vial_criterion(S: SurfaceStructure, bound: int = 10) -> CriterionVerdict:
    """Decide which of the three numerical cases (plane, quadric, blowup) applies."""
    L = S.lattice
    if not L.unimodular:
        raise HypothesisError("hypothesis unmet: lattice is not unimodular")
    if not S.geometric:
        raise HypothesisError("hypothesis unmet: lattice is not geometric")
    d = S.defect()
    if d != 0:
        raise HypothesisError(f"hypothesis unmet: defect is {d}, not 0")
    n = S.n
    if n < 3:
        raise HypothesisError("hypothesis unmet: rank below 3")
    v = la.solve_integral(S._rho, 1)
    cvv = L.chi(v, v)
    if cvv % 2 == 0:
        raise HypothesisError("hypothesis unmet: no rank-1 vector with odd chi(v, v)")
    t = (1 - cvv) // 2
    unit = tuple(x + t * y for x, y in zip(v, S.point))
    if L.chi(unit, unit) != 1 or S.rank_of(unit) != 1:
        raise ConsistencyError("rank-1 vector with chi = 1 not produced")
    K = la.to_ints(S.canonical)
    g = la.vec_gcd(K)
    even = S.ns_even
    w = {
        "n": n,
        "ns_even": even,
        "k": K,
        "k_gcd": g,
        "k_div3": all(x % 3 == 0 for x in K),
        "k_div2": all(x % 2 == 0 for x in K),
        "rank1_vector": v,
        "chi_vv": cvv,
        "unit_vector": unit,
    }
    if n == 3 and w["k_div3"]:
        num = 1
    elif n == 4 and even and w["k_div2"]:
        num = 2
    elif n >= 4 and not even and g == 1:
        num = 3
    else:
        num = None
    if num == 3:
        m = find_minus_one(S, bound)
        w["minus_one"] = m
        w["k_dot_minus_one"] = None if m is None else int(S.q(K, m))
    return CriterionVerdict(CASES[num], num, w)
