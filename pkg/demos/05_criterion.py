"""Which unimodular geometric lattices of zero defect look like P2,
a quadric, or a blown up plane.

Run: python3 demos/05_criterion.py
"""

from pseudolattices import models
from pseudolattices.errors import HypothesisError
from pseudolattices.lattice import SurfaceStructure
from pseudolattices.mmp import vial_criterion

cases = [models.p2(), models.p1xp1(0), models.f1(0)] + [models.blowup_p2(k) for k in (1, 3, 5)]
cases.append(models.ruled_surface(2))

for m in cases:
    S = SurfaceStructure(m.lattice, m.point)
    try:
        v = vial_criterion(S)
    except HypothesisError as exc:
        print(f"{m.lattice.name:<16} refused: {exc}")
        continue
    w = v.witnesses
    line = f"{m.lattice.name:<16} {v.case:<12} n={w['n']} NS even={w['ns_even']!s:<5} gcd(K)={w['k_gcd']}"
    if v.number == 3:
        line += f"  (-1)-class {w['minus_one']} with K.E = {w['k_dot_minus_one']}"
    print(line)
