"""Exceptional sequences, mutations, helices and norm descent.

Mutation words use the text syntax ``L<i>,R<i>,F<i>`` with 1-based indices:
``L<i>`` and ``R<i>`` act on the pair at positions ``(i, i+1)``, ``F<i>``
negates the ``i``-th vector.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import linalg as la
from .errors import (
    ConsistencyError,
    DefectNonzero,
    HypothesisError,
    NotExceptional,
    PseudolatticeError,
)
from .lattice import Pseudolattice, SurfaceStructure


@dataclass(frozen=True)
class SequenceCheck:
    ok: bool
    failure: Optional[tuple] = None  # 1-based (i, j) of the offending entry
    reason: str = ""
    is_basis: Optional[bool] = None
    unimodular: Optional[bool] = None


def is_exceptional_sequence(L: Pseudolattice, vectors) -> SequenceCheck:
    vectors = [tuple(v) for v in vectors]
    k = len(vectors)
    for i in range(k):
        if L.chi(vectors[i], vectors[i]) != 1:
            return SequenceCheck(False, (i + 1, i + 1), "chi(e_i, e_i) != 1")
    for i in range(k):
        for j in range(i):
            if L.chi(vectors[i], vectors[j]) != 0:
                return SequenceCheck(False, (i + 1, j + 1), "chi(e_i, e_j) != 0 for i > j")
    if k == L.rank:
        d = la.determinant(vectors)
        return SequenceCheck(True, is_basis=abs(d) == 1, unimodular=L.unimodular)
    return SequenceCheck(True)


@dataclass(frozen=True)
class ExceptionalBasis:
    lattice: Pseudolattice
    vectors: tuple
    gram: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        vecs = tuple(tuple(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        chk = is_exceptional_sequence(self.lattice, vecs)
        if not chk.ok:
            raise NotExceptional(f"not an exceptional sequence at {chk.failure}: {chk.reason}")
        object.__setattr__(
            self,
            "gram",
            tuple(tuple(self.lattice.chi(u, v) for v in vecs) for u in vecs),
        )

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]


@dataclass(frozen=True)
class Step:
    op: str  # "L", "R" or "F"
    index: int  # 1-based

    def __str__(self):
        return f"{self.op}{self.index}"


@dataclass(frozen=True)
class MutationWord:
    steps: tuple = ()

    _TOKEN = re.compile(r"^([LRF])(\d+)$")

    @classmethod
    def parse(cls, text: str) -> "MutationWord":
        text = text.strip()
        if not text:
            return cls(())
        steps = []
        for tok in text.split(","):
            m = cls._TOKEN.match(tok.strip())
            if not m or int(m.group(2)) < 1:
                raise ValueError(f"bad mutation token {tok!r}")
            steps.append(Step(m.group(1), int(m.group(2))))
        return cls(tuple(steps))

    def __str__(self):
        return ",".join(map(str, self.steps))

    def __len__(self):
        return len(self.steps)

    def __add__(self, other: "MutationWord") -> "MutationWord":
        return MutationWord(self.steps + other.steps)

    def inverse(self) -> "MutationWord":
        swap = {"L": "R", "R": "L", "F": "F"}
        return MutationWord(tuple(Step(swap[s.op], s.index) for s in reversed(self.steps)))


def _check_exceptional(L: Pseudolattice, e):
    if L.chi(e, e) != 1:
        raise NotExceptional(f"chi(e, e) = {L.chi(e, e)} != 1")


def mutate_element(L: Pseudolattice, e, v, direction: str) -> tuple:
    """``L_e(v) = v - chi(e, v) e`` or ``R_e(v) = v - chi(v, e) e``."""
    _check_exceptional(L, e)
    if direction == "L":
        c = L.chi(e, v)
    elif direction == "R":
        c = L.chi(v, e)
    else:
        raise ValueError("direction must be 'L' or 'R'")
    return tuple(x - c * y for x, y in zip(v, e))


def _apply_step(L: Pseudolattice, vecs: list, step: Step) -> list:
    i = step.index - 1
    n = len(vecs)
    if step.op == "F":
        if not 0 <= i < n:
            raise IndexError(f"flip index {step.index} out of range")
        vecs = list(vecs)
        vecs[i] = tuple(-x for x in vecs[i])
        return vecs
    if not 0 <= i < n - 1:
        raise IndexError(f"mutation index {step.index} out of range 1..{n - 1}")
    a, b = vecs[i], vecs[i + 1]
    vecs = list(vecs)
    if step.op == "L":
        vecs[i], vecs[i + 1] = mutate_element(L, a, b, "L"), a
    else:
        vecs[i], vecs[i + 1] = b, mutate_element(L, b, a, "R")
    return vecs


def mutate_basis(basis: ExceptionalBasis, i: int, direction: str) -> ExceptionalBasis:
    vecs = _apply_step(basis.lattice, list(basis.vectors), Step(direction, i))
    return ExceptionalBasis(basis.lattice, tuple(vecs))


def flip(basis: ExceptionalBasis, i: int) -> ExceptionalBasis:
    vecs = _apply_step(basis.lattice, list(basis.vectors), Step("F", i))
    return ExceptionalBasis(basis.lattice, tuple(vecs))


def apply_word(basis: ExceptionalBasis, word, verify: bool = True) -> ExceptionalBasis:
    """Replay a word.  With ``verify`` each intermediate sequence is rechecked."""
    if isinstance(word, str):
        word = MutationWord.parse(word)
    vecs = list(basis.vectors)
    for step in word.steps:
        vecs = _apply_step(basis.lattice, vecs, step)
        if verify:
            chk = is_exceptional_sequence(basis.lattice, vecs)
            if not chk.ok:  # pragma: no cover - mutations preserve exceptionality
                raise ConsistencyError(f"step {step} broke exceptionality at {chk.failure}")
    return ExceptionalBasis(basis.lattice, tuple(vecs))


def helix_element(basis: ExceptionalBasis, k: int) -> tuple:
    """``e_k`` of the helix generated by the basis (``e_i = S e_{i+n}``)."""
    L = basis.lattice
    S = L.serre
    if S is None:
        raise PseudolatticeError("no integral Serre operator")
    n = len(basis)
    q, r = divmod(k - 1, n)
    v = basis.vectors[r]
    if q > 0:
        Sinv = la.integral_inverse(S)
        for _ in range(q):
            v = la.matvec(Sinv, v)
    for _ in range(-q):
        v = la.matvec(S, v)
    return v


def ranks(S: SurfaceStructure, vectors) -> tuple:
    return tuple(S.rank_of(v) for v in vectors)


def norm(S: SurfaceStructure, basis) -> int:
    vecs = basis.vectors if isinstance(basis, ExceptionalBasis) else basis
    return sum(S.rank_of(v) ** 2 for v in vecs)


def elementary_moves(S: SurfaceStructure, vecs, rk, cyclic: bool = False):
    """``(new_norm_delta, index, op)`` for every elementary mutation.

    With ``cyclic`` the pair ``(e_n, e_{n+1})`` of the helix is included as
    index ``n``; see :func:`expand_step` for how it is realized.
    """
    L = S.lattice
    pairs = [(vecs[i], vecs[i + 1], rk[i], rk[i + 1]) for i in range(len(vecs) - 1)]
    if cyclic and len(vecs) > 1 and L.serre is not None:
        nxt = la.matvec(la.integral_inverse(L.serre), vecs[0])
        pairs.append((vecs[-1], nxt, rk[-1], rk[0]))
    out = []
    for i, (e, f, r1, r2) in enumerate(pairs):
        c = L.chi(e, f)
        # L: new element at position i has rank r_{i+1} - c r_i
        new = r2 - c * r1
        out.append((new * new - r2 ** 2, i + 1, "L"))
        new = r1 - c * r2
        out.append((new * new - r1 ** 2, i + 1, "R"))
    return out


def is_locally_minimal(S: SurfaceStructure, vecs, cyclic: bool = True) -> bool:
    rk = [S.rank_of(v) for v in vecs]
    return not any(m[0] < 0 for m in elementary_moves(S, list(vecs), rk, cyclic))


def expand_step(step: Step, n: int) -> list:
    """Steps realizing a move at the wraparound index ``n``.

    ``R1, ..., R(n-1)`` rotates the basis to ``(e_2, ..., e_n, S^-1 e_1)``,
    which keeps the norm, and the move then acts on the last pair.
    """
    if step.index != n:
        return [step]
    return [Step("R", i) for i in range(1, n)] + [Step(step.op, n - 1)]


def _best_descent(S, vecs, rk):
    cands = [m for m in elementary_moves(S, vecs, rk, cyclic=True) if m[0] < 0]
    if not cands:
        return None
    # smaller norm, then smaller index, then L before R
    return min(cands, key=lambda m: (m[0], m[1], m[2] != "L"))


@dataclass(frozen=True)
class DescentResult:
    basis: ExceptionalBasis
    word: MutationWord
    norm: int
    locally_minimal: bool
    plateau_states: int


def norm_minimize(
    S: SurfaceStructure, basis: ExceptionalBasis, plateau_depth: int = 3
) -> DescentResult:
    """Steepest descent of the norm over elementary mutations.

    Moves on the wraparound helix pair are allowed (see :func:`expand_step`),
    so the result is locally minimal in the cyclic sense.

    At a local minimum, equal-norm bases within ``plateau_depth`` mutations
    are searched breadth-first; if one of them admits a strictly decreasing
    mutation the descent resumes from there.  Otherwise the visited basis
    with the lexicographically least ``|rank|`` profile is kept (the first
    one found on ties, so an already minimal basis is returned unchanged).
    """
    L = S.lattice
    vecs = list(basis.vectors)
    steps: list = []
    explored = 0
    while True:
        rk = [S.rank_of(v) for v in vecs]
        mv = _best_descent(S, vecs, rk)
        if mv is not None:
            for step in expand_step(Step(mv[2], mv[1]), len(vecs)):
                vecs = _apply_step(L, vecs, step)
                steps.append(step)
            continue
        if plateau_depth <= 0:
            break
        path, best_path, n_seen = _plateau_search(S, vecs, plateau_depth)
        explored += n_seen
        if path is not None:
            for step in path:
                vecs = _apply_step(L, vecs, step)
            steps.extend(path)
            continue
        for step in best_path:
            vecs = _apply_step(L, vecs, step)
        steps.extend(best_path)
        break
    out = ExceptionalBasis(L, tuple(vecs))
    return DescentResult(out, MutationWord(tuple(steps)), norm(S, out), True, explored)


def _plateau_search(S: SurfaceStructure, vecs, depth: int):
    L = S.lattice
    start = tuple(vecs)
    seen = {start}
    queue = deque([(start, ())])
    best_key = tuple(abs(S.rank_of(v)) for v in start)
    best_path: tuple = ()
    while queue:
        state, path = queue.popleft()
        rk = [S.rank_of(v) for v in state]
        if path and _best_descent(S, state, rk) is not None:
            return list(path), [], len(seen)
        key = tuple(abs(r) for r in rk)
        if key < best_key:
            best_key, best_path = key, path
        if len(path) == depth:
            continue
        for delta, i, op in elementary_moves(S, state, rk):
            if delta != 0:
                continue
            step = Step(op, i)
            nxt = tuple(_apply_step(L, list(state), step))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, path + (step,)))
    return None, list(best_path), len(seen)


@dataclass(frozen=True)
class ReductionReport:
    k: int  # number of rank-zero vectors in the 0/1 pattern
    nonzero: int  # n - k, 3 or 4 by the theory
    pattern_ranks: tuple  # ranks at the 0/1 stage
    pattern_word_length: int  # steps used to reach the 0/1 pattern
    stage4_ran: bool
    final_ranks: tuple
    certificate: str = "local"


def _ns_first_positive(S: SurfaceStructure, v) -> bool:
    for x in S.project(v):
        if x:
            return x > 0
    return True


def _normalize_signs(S: SurfaceStructure, vecs, steps):
    for i, v in enumerate(vecs):
        r = S.rank_of(v)
        if r < 0 or (r == 0 and not _ns_first_positive(S, v)):
            step = Step("F", i + 1)
            vecs = _apply_step(S.lattice, vecs, step)
            steps.append(step)
    return vecs


def reduce_to_01(S: SurfaceStructure, basis: ExceptionalBasis, plateau_depth: int = 3):
    """Stages 1-3: norm descent, bubble zero ranks to the front, fix signs.

    Returns ``(basis, word, k)`` where the first ``k`` vectors have rank 0.
    """
    res = norm_minimize(S, basis, plateau_depth)
    L = S.lattice
    vecs = list(res.basis.vectors)
    steps = list(res.word.steps)
    while True:
        rk = [S.rank_of(v) for v in vecs]
        i = next((i for i in range(len(vecs) - 1) if rk[i] != 0 and rk[i + 1] == 0), None)
        if i is None:
            break
        step = Step("R", i + 1)
        vecs = _apply_step(L, vecs, step)
        steps.append(step)
    vecs = _normalize_signs(S, vecs, steps)
    rk = [S.rank_of(v) for v in vecs]
    k = sum(1 for r in rk if r == 0)
    return ExceptionalBasis(L, tuple(vecs)), MutationWord(tuple(steps)), k


def reduce_ranks(S: SurfaceStructure, basis: ExceptionalBasis, plateau_depth: int = 3):
    """Mutate an exceptional basis of a geometric lattice to ranks 0/1, then to all 1.

    Returns ``(basis, word, report)``.  Raises :class:`DefectNonzero` (with the
    0/1 result attached) when the defect is nonzero, since only the first
    stage is then available.
    """
    if not S.geometric:
        raise HypothesisError("geometricity required")
    L = S.lattice
    b01, word, k = reduce_to_01(S, basis, plateau_depth)
    rk = ranks(S, b01.vectors)
    nonzero = [r for r in rk if r != 0]
    if any(r != 1 for r in nonzero) or len(nonzero) not in (3, 4):
        raise ConsistencyError(
            f"local norm minimum with ranks {rk} does not have the 0/1 shape; "
            "increase plateau_depth"
        )
    report = ReductionReport(k, len(nonzero), rk, len(word), False, rk)
    if S.defect() != 0:
        raise DefectNonzero("defect nonzero: stopped at the 0/1 pattern", (b01, word, report))
    vecs = list(b01.vectors)
    steps = list(word.steps)
    ran = False
    while True:
        rk = [S.rank_of(v) for v in vecs]
        i = next((i for i in range(len(vecs) - 1) if rk[i] == 0 and rk[i + 1] == 1), None)
        if i is None:
            break
        ran = True
        step = Step("R", i + 1)
        vecs = _apply_step(L, vecs, step)
        steps.append(step)
        r_new = S.rank_of(vecs[i + 1])
        if r_new not in (1, -1):
            raise ConsistencyError(f"stage-4 rank not +-1 (got {r_new})")
        if r_new == -1:
            step = Step("F", i + 2)
            vecs = _apply_step(L, vecs, step)
            steps.append(step)
    final = ExceptionalBasis(L, tuple(vecs))
    fr = ranks(S, final.vectors)
    if any(r != 1 for r in fr):
        raise ConsistencyError(f"rank reduction ended with ranks {fr}")
    report = ReductionReport(k, len(nonzero), report.pattern_ranks, len(word), ran, fr)
    return final, MutationWord(tuple(steps)), report
