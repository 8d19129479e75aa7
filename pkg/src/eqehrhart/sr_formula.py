"""h* from a G-invariant lattice triangulation via box points and Stanley-Reisner link data.

A lattice point x of the cone over P lies in the relative interior of a unique cone C_F.
Writing x = u + Σ n_v (v,1) with u in the fully open box of its own cone C_E (E ⊆ F) gives
n_v ≥ 0 on E and n_v ≥ 1 on σ = F \\ E, a face of lk(E). Summing over g-fixed data gives

    Ehr(P;t)(g) = Σ_[u] t^{ht u} Ind_{G_u}^G(Hilb(SR(Star E_u)))(g),

and h*(g) is this times det(I - g̃ t). This is independent of the direct fixed-polytope method.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import exactlin as el
from .ehrhart_engine import box_points
from .group_action import FiniteGroup
from .hstar import HStarSeries, det_class_function, scale_action
from .polytope import RationalPolytope, normalized_volume
from .ratfunc import Poly, RatFunc
from .triangulate import PolyComplex, scale_complex


class NotStabilized(ValueError):
    pass


class SimplicialFan:
    """Fan over the faces of a lattice triangulation; rays are (v, 1) for vertices v."""

    def __init__(self, T: PolyComplex, group: FiniteGroup):
        if not T.is_triangulation():
            raise ValueError("fan requires a triangulation")
        if any(not el.is_integral(v) for v in T.vertices):
            raise ValueError("fan requires a lattice triangulation")
        self.T = T
        self.group = group
        self.cones = [frozenset()] + [f for f in T.faces]
        self.cone_set = set(self.cones)
        self.perm = []
        for g in group.elements:
            p = {}
            for i in T.vertex_indices:
                j = T.index.get(g(T.points[i]))
                if j is None:
                    raise ValueError("triangulation is not invariant")
                p[i] = j
            self.perm.append(p)
        self._links = {}

    def ray(self, i: int) -> tuple:
        return tuple(self.T.points[i]) + (Fraction(1),)

    def image(self, g: int, cone) -> frozenset:
        return frozenset(self.perm[g][i] for i in cone)

    def link(self, E) -> list:
        if E not in self._links:
            self._links[E] = [s for s in self.cones if not (s & E) and (s | E) in self.cone_set]
        return self._links[E]

    def cycles(self, g: int, cone) -> list:
        """Cycle lengths of g on the rays of a g-stable cone."""
        p = self.perm[g]
        seen = set()
        out = []
        for i in sorted(cone):
            if i in seen:
                continue
            n = 0
            j = i
            while j not in seen:
                seen.add(j)
                j = p[j]
                n += 1
            out.append(n)
        return out


@dataclass
class BoxOrbit:
    point: tuple
    height: int
    cone: frozenset
    stabilizer: list
    size: int


def _act(group: FiniteGroup, g: int, x: tuple) -> tuple:
    return tuple(Fraction(c) for c in group.elements[g].apply_ext(list(x)))


def _box_points(fan: SimplicialFan) -> dict:
    """Every point of BBox(S), mapped to the cone in whose open box it lies."""
    if not hasattr(fan, "_box"):
        pts = {tuple([Fraction(0)] * (len(fan.T.points[0]) + 1)): frozenset()}
        for E in fan.cones:
            if E:
                for b in box_points([fan.ray(i) for i in sorted(E)], fully_open=True):
                    pts[tuple(Fraction(c) for c in b.point)] = E
        fan._box = pts
    return fan._box


def box_orbits(fan: SimplicialFan, group: FiniteGroup) -> list:
    """G-orbits on BBox(S) = ⊔_E BBox°(C_E), with stabilizers of representatives."""
    pts = _box_points(fan)
    out = []
    done = set()
    for u in sorted(pts, key=lambda x: (x[-1], x)):
        if u in done:
            continue
        orb = {_act(group, g, u) for g in range(group.order)}
        done |= orb
        stab = [g for g in range(group.order) if _act(group, g, u) == u]
        out.append(BoxOrbit(u, int(u[-1]), pts[u], stab, len(orb)))
    return out


def link_hilbert_at_g(fan: SimplicialFan, E, g: int) -> RatFunc:
    """Character value at g of Hilb(SR(Star_Σ(C_E))): a sum over g-fixed faces of the link."""
    E = frozenset(E)
    if fan.image(g, E) != E:
        raise NotStabilized("g does not stabilize the cone")
    total = RatFunc.from_poly(0)
    for s in fan.link(E):
        if fan.image(g, s) != s:
            continue
        ls = fan.cycles(g, s)
        num = Poly.monomial(sum(ls))
        total = total + RatFunc.structured(num, ls)
    base = RatFunc.structured(Poly([1]), fan.cycles(g, E))
    return total * base


def _induced_value(group: FiniteGroup, stab: list, r: int, value) -> RatFunc:
    h = set(stab)
    acc = RatFunc.from_poly(0)
    for x in range(group.order):
        y = group.conjugate(x, r)
        if y in h:
            acc = acc + value(y)
    return acc * RatFunc.from_poly(Poly([Fraction(1, len(h))]))


def ehr_via_triangulation(fan: SimplicialFan, group: FiniteGroup, use_orbits: bool = False) -> list:
    """Ehr(P;t) per class.

    With ``use_orbits`` the value is assembled literally as Σ_[u] t^{ht u} Ind_{G_u}^G(...)(g).
    By default the equivalent sum over g-fixed box points is used, with every term written over
    the common denominator (1 - t^m)^k, m = ord(g); this avoids rational-function arithmetic.
    """
    funcs = []
    if use_orbits:
        cache = {}

        def hilb(E, y):
            if (E, y) not in cache:
                cache[(E, y)] = link_hilbert_at_g(fan, E, y)
            return cache[(E, y)]

        orbits = box_orbits(fan, group)
        for r in group.reps:
            total = RatFunc.from_poly(0)
            for o in orbits:
                v = _induced_value(group, o.stabilizer, r, lambda y, E=o.cone: hilb(E, y))
                total = total + v * RatFunc.from_poly(Poly.monomial(o.height))
            funcs.append(total.reduced())
        return funcs
    pts = _box_points(fan)
    by_cone = {}
    for u, E in pts.items():
        by_cone.setdefault(E, []).append(u)
    k = max(len(c) for c in fan.cones)
    for r in group.reps:
        m = group.orders[r]
        num = [0]
        for E, us in by_cone.items():
            if fan.image(r, E) != E:
                continue
            heights = Counter(int(u[-1]) for u in us if _act(group, r, u) == u)
            if not heights:
                continue
            box = [0] * (max(heights) + 1)
            for h, c in heights.items():
                box[h] = c
            num = _padd(num, _pmul(box, _star_numerator(fan, E, r, m, k)))
        funcs.append(RatFunc(Poly(num), factors=Counter({m: k})).reduced())
    return funcs


def _pmul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def _geom(l: int, m: int) -> list:
    """(1 - t^m)/(1 - t^l) for l | m."""
    out = [0] * (m - l + 1)
    for j in range(0, m, l):
        out[j] = 1
    return out


def _star_numerator(fan: SimplicialFan, E, g: int, m: int, k: int) -> list:
    """Hilb(SR(Star E))(g) times (1 - t^m)^k as an integer coefficient list."""
    one_minus = [1] + [0] * (m - 1) + [-1]
    out = [0]
    cE = fan.cycles(g, E)
    for s in fan.link(E):
        if fan.image(g, s) != s:
            continue
        cs = fan.cycles(g, s)
        term = [0] * sum(cs) + [1]
        for l in cE + cs:
            term = _pmul(term, _geom(l, m))
        for _ in range(k - len(cE) - len(cs)):
            term = _pmul(term, one_minus)
        out = _padd(out, term)
    return out


def hstar_via_triangulation(P: RationalPolytope, group: FiniteGroup, T: PolyComplex,
                            N: Optional[int] = None) -> HStarSeries:
    """h* from an invariant triangulation; a (1/N)M triangulation yields h*(NP, ρ_N) = Ψ_Int(h*_N)."""
    N = N if N is not None else (getattr(T, "N", None) or T.denominator)
    if N > 1:
        P, group = scale_action(P, group, N)
        T = scale_complex(T, N)
    fan = SimplicialFan(T, group)
    ehr = ehr_via_triangulation(fan, group)
    dets = det_class_function(group, P)
    h = HStarSeries(group, [e * RatFunc.from_poly(d) for e, d in zip(ehr, dets)], 1, P.dim)
    h.scaled_by = N
    return h


def volume_check(P: RationalPolytope, h: HStarSeries) -> bool:
    """The identity-class h* sums to the normalized volume."""
    f = h.funcs[h.group.class_of[0]]
    if not f.is_polynomial():
        return False
    scale = getattr(h, "scaled_by", 1)
    return sum(f.as_poly().c) == normalized_volume(P, full=False) * scale ** P.dim
