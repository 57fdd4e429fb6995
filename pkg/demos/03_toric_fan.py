"""Toric systems and their fans.

Run: python3 demos/03_toric_fan.py [output-directory]
Writes one SVG picture per model.
"""

import sys
from pathlib import Path

from pseudolattices import models
from pseudolattices.exceptional import ExceptionalBasis
from pseudolattices.lattice import SurfaceStructure
from pseudolattices.toric import fan_of, fan_svg, polygon_report, toric_system_of, verify_toric_system

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else ".")

for m in (models.p2(), models.p1xp1(0), models.p1xp1(1), models.f1(0)):
    S = SurfaceStructure(m.lattice, m.point)
    ts = toric_system_of(S, ExceptionalBasis(m.lattice, m.basis))
    rep = verify_toric_system(ts, S.canonical)
    fan = fan_of(ts)
    poly = polygon_report(fan)
    print(m.lattice.name)
    print("   lambda  ", [tuple(str(x) for x in v) for v in ts.lambdas])
    print("   a       ", [int(a) for a in ts.a_adjacent()], " gamma", rep.gamma)
    print("   rays    ", fan.ells, " h =", fan.h)
    print("   extremal", poly.extremal, " zero inside:", poly.zero_interior)
    for c in poly.negatives:
        print(f"   a_{c.index},{c.index + 1} = {c.a}: inside the triangle of its neighbours: {c.contained}")
    path = out_dir / f"fan_{m.lattice.name.replace('(', '_').replace(')', '')}.svg"
    path.write_text(fan_svg(fan))
    print("   picture ", path)
