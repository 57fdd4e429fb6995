"""Mutations, the helix and norm descent.

Run: python3 demos/02_mutations.py
"""

import random

from pseudolattices import models
from pseudolattices.exceptional import (
    ExceptionalBasis,
    MutationWord,
    apply_word,
    helix_element,
    norm,
    norm_minimize,
    reduce_ranks,
)
from pseudolattices.lattice import SurfaceStructure


def setup(m):
    return SurfaceStructure(m.lattice, m.point), ExceptionalBasis(m.lattice, m.basis)


S, B = setup(models.p2())
ranks = lambda b: [S.rank_of(v) for v in b.vectors]  # noqa: E731

# Words are comma separated and 1-based: L1 replaces (e1, e2) by (L_{e1} e2, e1).
b = apply_word(B, "L1")
print("after L1:", b.vectors, "ranks", ranks(b), "norm", norm(S, b))

# The helix continues the basis in both directions through the Serre operator.
print("e_0 =", helix_element(B, 0), " e_4 =", helix_element(B, 4))

# Scramble, then walk back down.  The minimum for the plane has norm 3.
rng = random.Random(0)
for _ in range(3):
    w = MutationWord.parse(",".join(f"{rng.choice('LR')}{rng.randint(1, 2)}" for _ in range(8)))
    start = apply_word(B, w)
    res = norm_minimize(S, start)
    print(f"scramble {w}  norm {norm(S, start)} -> {res.norm}  via {res.word}")

# F1: the standard basis has all ranks 1, yet one left mutation reaches a
# rank-zero class (the structure sheaf of the (-1)-section).
S, B = setup(models.f1(1))
res = norm_minimize(S, B)
print()
print("F1(1): descent word", res.word, "ranks", [S.rank_of(v) for v in res.basis.vectors])
final, word, rep = reduce_ranks(S, B)
print("F1(1): reduce word", word, "pattern", rep.pattern_ranks, "final", rep.final_ranks)

S, B = setup(models.blowup_p2(4))
final, word, rep = reduce_ranks(S, B)
print("BlowupP2(4): pattern", rep.pattern_ranks, "final", rep.final_ranks)
