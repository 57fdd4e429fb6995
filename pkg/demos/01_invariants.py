"""Invariants of the built-in surface models.

Run: python3 demos/01_invariants.py
"""

from pseudolattices import models
from pseudolattices.lattice import Pseudolattice, SurfaceStructure, detect_surface_like, invariants_report

# The plane, written in the basis (O, O(1), O(2)).
p2 = models.p2()
print("Gram matrix of P2:")
for row in p2.lattice.gram:
    print("   ", row)

# A point-like class is found from the Gram matrix alone.
det = detect_surface_like(Pseudolattice(p2.lattice.gram))
print("detected point:", det.candidates, "case", det.case)

S = SurfaceStructure(p2.lattice, det.candidates[0])
rep = invariants_report(S)
print("NS rank", rep.ns_rank, " K =", [str(x) for x in rep.canonical], " K^2 =", rep.k_squared, " defect", rep.defect.defect)

# Same report across the zoo.  Ruled surfaces over curves of genus g have
# defect -8g; the K3 Mukai lattice is not unimodular so it has no defect.
print()
print(f"{'model':<18}{'rk NS':>6}{'K^2':>6}{'defect':>8}  geometric  minimal")
zoo = [models.p2(), models.p1xp1(0), models.f1(1), models.blowup_p2(3),
       models.ruled_surface(2), models.k3_mukai()]
for m in zoo:
    S = SurfaceStructure(m.lattice, m.point)
    r = invariants_report(S)
    d = "-" if r.defect is None else r.defect.defect
    k2 = "-" if r.k_squared is None else r.k_squared
    print(f"{m.lattice.name:<18}{r.ns_rank:>6}{str(k2):>6}{str(d):>8}  {str(r.geometric):<9}  {r.minimal}")
