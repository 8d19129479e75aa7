"""Ehrhart series of rational polytopes via half-open simplicial cones and box points."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlin as el
from .group_action import FiniteGroup
from .polytope import RationalPolytope, fixed_polytope, lattice_points, NotInvariant
from .ratfunc import Poly, RatFunc
from .repr_ring import ClassFunction, perm_character


class NotSimplicial(ValueError):
    pass


class NotSimplex(ValueError):
    pass


@dataclass(frozen=True)
class BoxPoint:
    point: tuple
    height: int
    lambdas: tuple


def _cone_lattice(rays: Sequence[Sequence]) -> tuple[list, list]:
    """Basis of Z^n ∩ span(rays) and the rays as primitive integer coordinate rows."""
    rays = [el.primitive(r) for r in rays]
    n = len(rays[0])
    basis = el.saturate([list(r) for r in rays], n)
    if len(basis) != len(rays):
        raise NotSimplicial("rays are linearly dependent")
    bt = el.transpose(basis)
    coords = [el.primitive(el.solve_rational(bt, list(r))) for r in rays]
    return basis, coords


def box_points(rays: Sequence[Sequence], open_facets=frozenset(), fully_open: bool = False,
               grading=None) -> list:
    """Lattice points of the fundamental parallelepiped of a simplicial cone.

    Coordinates λ_j lie in [0,1), except in (0,1] for j in ``open_facets``.
    With ``fully_open`` only points with every λ_j in (0,1) are returned.
    The lattice is Z^n ∩ span(rays); rays are replaced by their primitive vectors.
    """
    grading = grading or (lambda v: v[-1])
    if not rays:
        return [BoxPoint((), 0, ())]
    basis, U = _cone_lattice(rays)
    k = len(U)
    diag, _, V = el.snf(U)
    vinv = el.inverse(V)
    uinv = el.inverse(U)
    gens = [tuple(el.vecmat(list(u), basis)) for u in U]
    out = []
    for w in itertools.product(*[range(abs(d)) for d in diag]):
        x = el.vecmat(list(w), vinv)
        lam = el.vecmat(x, uinv)
        lam = [l - math.floor(l) for l in lam]
        if fully_open and any(l == 0 for l in lam):
            continue
        lam = [Fraction(1) if (j in open_facets and l == 0) else l for j, l in enumerate(lam)]
        pt = tuple(sum(l * g[i] for l, g in zip(lam, gens)) for i in range(len(gens[0])))
        pt = tuple(int(c) for c in pt)
        out.append(BoxPoint(pt, int(grading(pt)), tuple(lam)))
    out.sort(key=lambda b: (b.height, b.point))
    return out


def _cone_series(rays, open_facets=frozenset()) -> RatFunc:
    pts = box_points(rays, open_facets)
    prim = [el.primitive(r) for r in rays]
    num = Poly.from_terms(Counter(b.height for b in pts))
    return RatFunc.structured(num, [r[-1] for r in prim])


def _homogenize(v) -> tuple:
    return tuple(el.rat_vector(v)) + (Fraction(1),)


def simplex_ehr_series(vertices: Sequence) -> RatFunc:
    """Ehr(Q;t) of a rational simplex counting points of (1/m)Z^n."""
    pts = [_homogenize(v) for v in vertices]
    if el.rank([list(p) for p in pts]) != len(pts):
        raise NotSimplex("vertices are affinely dependent")
    return _cone_series(pts)


def _lex_sign(normal: Sequence, q: Sequence) -> int:
    """Sign of normal·(q + ε e_1 + ε² e_2 + ...) for infinitesimal ε."""
    v = el.dot(normal, q)
    if v != 0:
        return 1 if v > 0 else -1
    for c in normal:
        if c != 0:
            return 1 if c > 0 else -1
    raise ValueError("zero normal")


def polytope_ehr_series(P: RationalPolytope, triangulation: Optional[list] = None) -> RatFunc:
    """Ehr(P;t) as a rational function, counting (1/m)Z^n points of P.

    The cone over P is split into half-open simplicial cones; a facet of a simplex
    is left out when it faces away from the lexicographically perturbed barycenter.
    """
    if P.dim == 0:
        return simplex_ehr_series(P.vertices)
    tri = triangulation if triangulation is not None else P.pulling_triangulation
    hom = [_homogenize(v) for v in P.vertices]
    basis = el.saturate([list(el.primitive(h)) for h in hom], P.n + 1)
    bt = el.transpose(basis)
    loc = [el.solve_rational(bt, list(h)) for h in hom]
    q = [sum(c[j] for c in loc) / len(loc) for j in range(len(basis))]
    total = None
    for simplex in tri:
        idx = sorted(simplex)
        U = [list(el.primitive(loc[i])) for i in idx]
        uinv = el.inverse(U)
        open_f = frozenset(j for j in range(len(idx)) if _lex_sign([uinv[r][j] for r in range(len(idx))], q) < 0)
        rays = [tuple(el.vecmat(u, basis)) for u in U]
        term = _cone_series(rays, open_f)
        total = term if total is None else total + term
    return total


def polytope_interior_series(P: RationalPolytope) -> RatFunc:
    """Σ_{m>0} |relint(P) ∩ (1/m)Z^n| t^m by Möbius inversion over the face lattice."""
    total = RatFunc.from_poly(0)
    for f in P.faces:
        d = P.face_dim(f)
        sign = (-1) ** (P.dim - d)
        total = total + (polytope_ehr_series(P.face_polytope(f)) - 1) * sign
    return total


# ---------------------------------------------------------------- equivariant

class EquivariantSeries:
    """Per-conjugacy-class rational functions in t."""

    def __init__(self, group: FiniteGroup, funcs: Sequence[RatFunc]):
        self.group = group
        self.funcs = list(funcs)

    def __getitem__(self, cls: int) -> RatFunc:
        return self.funcs[cls]

    def at_element(self, g: int) -> RatFunc:
        return self.funcs[self.group.class_of[g]]

    def coefficient(self, m: int) -> ClassFunction:
        return ClassFunction(self.group, [f.series(m + 1)[m] for f in self.funcs])

    def coefficients(self, n: int) -> list:
        ser = [f.series(n) for f in self.funcs]
        return [ClassFunction(self.group, [s[m] for s in ser]) for m in range(n)]

    def __mul__(self, other):
        if isinstance(other, EquivariantSeries):
            return EquivariantSeries(self.group, [a * b for a, b in zip(self.funcs, other.funcs)])
        return EquivariantSeries(self.group, [a * other for a in self.funcs])

    def __eq__(self, other):
        return isinstance(other, EquivariantSeries) and all(a == b for a, b in zip(self.funcs, other.funcs))

    def reduced(self) -> "EquivariantSeries":
        return EquivariantSeries(self.group, [f.reduced() for f in self.funcs])


def check_invariant(P: RationalPolytope, group: FiniteGroup):
    for g in group.elements:
        if not P.is_invariant(g):
            raise NotInvariant(f"polytope is not invariant under {g}")


def equivariant_ehr(P: RationalPolytope, group: FiniteGroup) -> EquivariantSeries:
    check_invariant(P, group)
    funcs = []
    for r in group.reps:
        Pg = fixed_polytope(P, group.elements[r])
        funcs.append(polytope_ehr_series(Pg))
    return EquivariantSeries(group, funcs)


def equivariant_L(P: RationalPolytope, group: FiniteGroup, m: int, interior: bool = False) -> ClassFunction:
    """Permutation character of G on P ∩ (1/m)M (or its interior)."""
    return perm_character(group, lattice_points(P, m, interior))
