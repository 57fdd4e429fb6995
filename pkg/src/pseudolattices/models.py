"""Concrete pseudolattices: planes, quadrics, Hirzebruch and ruled surfaces,
blowups of the plane and untwisted K3 Mukai lattices.

Surface models live on coordinates ``(r, D, s)``: rank, first Chern class in
a fixed basis of NS, and the Euler-characteristic coordinate ``s = chi(O, -)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg as la
from .lattice import Pseudolattice


@dataclass(frozen=True)
class Model:
    """A built model: the lattice, its point and (if known) an exceptional basis."""

    lattice: Pseudolattice
    point: tuple
    basis: Optional[tuple] = None
    ns_gram: Optional[tuple] = field(default=None, compare=False)
    canonical: Optional[tuple] = field(default=None, compare=False)


def surface_chi(ns_gram, K, chi0, v1, v2) -> int:
    """Euler form of two classes ``(r, D, s)`` on a surface with NS form ``ns_gram``.

    ``chi = r1 s2 + r2 s1 - r1 r2 chi0 - D1.D2 + r2 (K.D1)``.
    """
    r1, D1, s1 = v1[0], v1[1:-1], v1[-1]
    r2, D2, s2 = v2[0], v2[1:-1], v2[-1]
    return (
        r1 * s2
        + r2 * s1
        - r1 * r2 * chi0
        - la.bilinear(ns_gram, D1, D2)
        + r2 * la.bilinear(ns_gram, K, D1)
    )


def surface_model(ns_gram, K, chi0: int, d: int = 1) -> Pseudolattice:
    """Pseudolattice on ``Z + NS + Z`` with the surface Euler form.

    Only ``d = 1`` (a 0-cycle of degree one exists) is supported.
    """
    if d != 1:
        raise ValueError("only the normalization d = 1 is supported")
    ns_gram = la.as_matrix(ns_gram)
    m = len(ns_gram)
    if len(K) != m:
        raise ValueError("canonical class has the wrong length")
    if la.determinant(ns_gram) == 0 or any(
        ns_gram[i][j] != ns_gram[j][i] for i in range(m) for j in range(m)
    ):
        raise ValueError("degenerate or non-symmetric ns_gram")
    n = m + 2
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gram = tuple(
        tuple(surface_chi(ns_gram, K, chi0, u, v) for v in basis) for u in basis
    )
    return Pseudolattice(gram)


def line_bundle(ns_gram, K, chi0: int, D) -> tuple:
    """Class of ``O(D)``; the last coordinate is Riemann-Roch."""
    D = tuple(D)
    num = la.bilinear(ns_gram, D, D) - la.bilinear(ns_gram, K, D)
    return (1,) + D + (chi0 + num // 2,)


def _unit(m, i, scale=1):
    return tuple(scale * int(j == i) for j in range(m))


def _in_basis(L: Pseudolattice, classes, name) -> Model:
    return Pseudolattice(
        tuple(tuple(L.chi(u, v) for v in classes) for u in classes), name=name
    )


def p2_data():
    ns, K = ((1,),), (-3,)
    classes = tuple(line_bundle(ns, K, 1, (k,)) for k in range(3))
    return ns, K, 1, classes


def p1xp1_data(c: int = 0):
    ns, K = ((0, 1), (1, 0)), (-2, -2)
    Ds = [(0, 0), (1, 0), (c, 1), (c + 1, 1)]
    return ns, K, 1, tuple(line_bundle(ns, K, 1, D) for D in Ds)


def f1_data(c: int = 0):
    # NS basis (f, s): fiber and (-1)-section
    ns, K = ((0, 1), (1, -1)), (-3, -2)
    Ds = [(0, 0), (1, 0), (c, 1), (c + 1, 1)]
    return ns, K, 1, tuple(line_bundle(ns, K, 1, D) for D in Ds)


def blowup_p2_data(k: int):
    # NS basis (H, E_1, ..., E_k)
    m = k + 1
    ns = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(m)) for i in range(m))
    K = (-3,) + (1,) * k
    exc = tuple((0,) + _unit(m, i) + (0,) for i in range(1, m))
    lines = tuple(line_bundle(ns, K, 1, _unit(m, 0, t)) for t in range(3))
    return ns, K, 1, exc + lines


def _from_classes(ns, K, chi0, classes, name) -> Model:
    """Model written in the basis of the given classes (they must be a Z-basis)."""
    ambient = surface_model(ns, K, chi0)
    L = _in_basis(ambient, classes, name)
    # point (0, ..., 0, 1) expressed in the new basis
    T = la.transpose(classes)
    p = la.to_ints(la.solve_rational(T, (0,) * (len(ns) + 1) + (1,)))
    n = L.rank
    basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return Model(L, p, basis, ns, K)


def p2() -> Model:
    ns, K, chi0, classes = p2_data()
    return _from_classes(ns, K, chi0, classes, "P2")


def p1xp1(c: int = 0) -> Model:
    ns, K, chi0, classes = p1xp1_data(c)
    return _from_classes(ns, K, chi0, classes, f"P1xP1({c})")


def f1(c: int = 0) -> Model:
    ns, K, chi0, classes = f1_data(c)
    return _from_classes(ns, K, chi0, classes, f"F1({c})")


def blowup_p2(k: int) -> Model:
    """Plane blown up in ``k`` points, on ``(r, D, s)`` coordinates.

    The basis is ``(O_{E_1}(-1), ..., O_{E_k}(-1), O, O(H), O(2H))`` with the
    rank-zero classes first.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    ns, K, chi0, classes = blowup_p2_data(k)
    L = surface_model(ns, K, chi0)
    L = Pseudolattice(L.gram, name=f"BlowupP2({k})")
    p = (0,) * (k + 2) + (1,)
    return Model(L, p, classes, ns, K)


def ruled_surface(g: int) -> Model:
    """Ruled surface over a genus ``g`` curve with a (-1)-section; NS basis (f, s)."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    ns, K = ((0, 1), (1, -1)), (2 * g - 3, -2)
    L = surface_model(ns, K, 1 - g)
    return Model(Pseudolattice(L.gram, name=f"RuledSurface({g})"), (0, 0, 0, 1), None, ns, K)


def k3_mukai(ns_gram=((2,),)) -> Model:
    """Untwisted Mukai lattice ``chi = r1 s2 - D1.D2 + s1 r2``."""
    ns_gram = la.as_matrix(ns_gram)
    m = len(ns_gram)
    L = surface_model(ns_gram, (0,) * m, 0)
    return Model(Pseudolattice(L.gram, name="K3Mukai"), (0,) * (m + 1) + (1,), None, ns_gram, (0,) * m)


def custom_surface(ns_gram, K, chi0: int, d: int = 1) -> Model:
    ns_gram = la.as_matrix(ns_gram)
    L = surface_model(ns_gram, tuple(K), chi0, d)
    return Model(Pseudolattice(L.gram, name="SurfaceModel"), (0,) * (len(ns_gram) + 1) + (1,), None, ns_gram, tuple(K))


P2_GRAM = ((1, 3, 6), (0, 1, 3), (0, 0, 1))


def p1xp1_gram(c: int):
    return (
        (1, 2, 2 * c + 2, 2 * c + 4),
        (0, 1, 2 * c, 2 * c + 2),
        (0, 0, 1, 2),
        (0, 0, 0, 1),
    )


def f1_gram(c: int):
    return (
        (1, 2, 2 * c + 1, 2 * c + 3),
        (0, 1, 2 * c - 1, 2 * c + 1),
        (0, 0, 1, 2),
        (0, 0, 0, 1),
    )


MODEL_NAMES = ("P2", "P1xP1", "F1", "BlowupP2", "RuledSurface", "K3Mukai")


def build(name: str, c: int = 0, k: int = 1, genus: int = 0) -> Model:
    """Build a model by its stable identifier."""
    key = name.lower()
    if key == "p2":
        return p2()
    if key == "p1xp1":
        return p1xp1(c)
    if key == "f1":
        return f1(c)
    if key == "blowupp2":
        return blowup_p2(k)
    if key == "ruledsurface":
        return ruled_surface(genus)
    if key == "k3mukai":
        return k3_mukai()
    raise ValueError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")


def known_basis(model: Model):
    return model.basis
