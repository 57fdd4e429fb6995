"""Contracting rank-zero exceptional classes down to a minimal model.

Run: python3 demos/04_minimal_models.py
"""

from pseudolattices import models
from pseudolattices.exceptional import ExceptionalBasis
from pseudolattices.lattice import SurfaceStructure
from pseudolattices.mmp import classify_minimal, contract, minimal_model

for m in (models.f1(1), models.blowup_p2(3), models.p1xp1(5)):
    S = SurfaceStructure(m.lattice, m.point)
    B = ExceptionalBasis(m.lattice, m.basis)
    res = minimal_model(S, B)
    print(m.lattice.name, "->", len(res.steps), "contraction(s)")
    for st in res.steps:
        print(f"   K.e = {st.k_dot_e:+d}  K^2 {st.k_squared_before} -> {st.k_squared_after}"
              f"  defect {st.defect_before} -> {st.defect_after}")
    cls = classify_minimal(res.final, res.basis)
    extra = f" (input shift c = {cls.c})" if cls.c is not None else ""
    print("   minimal model:", cls.kind + extra, " K^2 =", cls.k_squared)

# Without a basis the (-1)-classes are searched for in a box of NS.
m = models.blowup_p2(2)
res = minimal_model(SurfaceStructure(m.lattice, m.point), None, bound=5)
print()
print("BlowupP2(2) without a basis:", len(res.steps), "contractions,", res.status)

# Ruled surfaces: contracting the (-1)-section moves the defect from -8g to
# 4g(g-3), so the defect may rise when K.e is not +-1.
print()
for g in range(5):
    m = models.ruled_surface(g)
    S = SurfaceStructure(m.lattice, m.point)
    _, st = contract(S, (0, 0, 1, 0))
    print(f"genus {g}: K.e = {st.k_dot_e:+d}, defect {st.defect_before} -> {st.defect_after}")
