"""Rational polytopes: exact hulls, face lattices, fixed polytopes, volumes and point counts.

Also holds lattice charts, which re-express a polytope living in an affine
sublattice (or a quotient lattice) in standard integer coordinates.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import exactlin as el
from .group_action import AffineMap


class NotInvariant(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------- double description

def cone_facets(gens: Sequence[Sequence[int]]) -> list:
    """Primitive inner facet normals of the full-dimensional pointed cone spanned by gens."""
    gens = [tuple(int(x) for x in g) for g in gens]
    k = len(gens[0])
    basis_idx = []
    rows = []
    for i, g in enumerate(gens):
        if el.rank(rows + [list(g)]) > len(rows):
            rows.append(list(g))
            basis_idx.append(i)
        if len(rows) == k:
            break
    if len(rows) < k:
        raise DimensionMismatch("cone is not full-dimensional")
    binv = el.inverse(rows)
    rays = []
    for j in range(k):
        r = el.primitive([binv[i][j] for i in range(k)])
        z = frozenset(basis_idx[i] for i in range(k) if i != j)
        rays.append((r, z))
    done = set(basis_idx)
    for i, g in enumerate(gens):
        if i in done:
            continue
        done.add(i)
        vals = [el.dot(g, r) for r, _ in rays]
        pos = [(ray, v) for ray, v in zip(rays, vals) if v > 0]
        neg = [(ray, v) for ray, v in zip(rays, vals) if v < 0]
        if not neg:
            rays = [(r, z | {i}) if v == 0 else (r, z) for (r, z), v in zip(rays, vals)]
            continue
        new = [(r, z | {i}) if v == 0 else (r, z) for (r, z), v in zip(rays, vals) if v >= 0]
        for (rp, zp), vp in pos:
            for (rn, zn), vn in neg:
                common = zp & zn
                if len(common) < k - 2:
                    continue
                if any(common <= z for r, z in rays if r is not rp and r is not rn):
                    continue
                w = el.primitive([vp * a - vn * b for a, b in zip(rn, rp)])
                new.append((w, common | {i}))
        rays = new
    return sorted({r for r, _ in rays})


# ---------------------------------------------------------------- affine hulls

class AffineHull:
    """Affine span of a point set: base point, rational direction basis, equations."""

    def __init__(self, points: Sequence):
        pts = [el.rat_vector(p) for p in points]
        self.n = len(pts[0])
        self.base = pts[0]
        diffs = [list(el.vsub(p, self.base)) for p in pts[1:]]
        if diffs:
            r, piv = el.rref(diffs)
            self.basis = [tuple(row) for row in r[: len(piv)]]
            self.pivots = piv
        else:
            self.basis, self.pivots = [], []
        self.dim = len(self.basis)
        eqs = []
        for a in el.nullspace([list(b) for b in self.basis], self.n) if self.basis else el.nullspace([], self.n):
            a = el.primitive(a)
            eqs.append((a, el.dot(a, self.base)))
        self.eqs = eqs

    def local(self, x) -> tuple:
        """Coordinates c with x = base + c·basis (x assumed in the span)."""
        d = el.vsub(el.rat_vector(x), self.base)
        return tuple(d[j] for j in self.pivots)

    def contains(self, x) -> bool:
        return all(el.dot(a, x) == b for a, b in self.eqs)

    def lift_normal(self, alpha: Sequence, beta) -> tuple:
        """Turn alpha·c + beta >= 0 (local) into a·x >= b (ambient, valid on the span)."""
        a = [Fraction(0)] * self.n
        for j, col in enumerate(self.pivots):
            a[col] = Fraction(alpha[j])
        b = el.dot(a, self.base) - beta
        d = el.lcm_denominators(a + [b])
        ai = [int(x * d) for x in a]
        bi = b * d
        g = 0
        for x in ai:
            g = math.gcd(g, x)
        return tuple(x // g for x in ai), bi / g


# ---------------------------------------------------------------- polytopes

class RationalPolytope:
    """Convex hull of finitely many rational points, with H-description and face lattice."""

    def __init__(self, points: Sequence):
        pts = sorted({el.rat_vector(p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        self.n = len(pts[0])
        self.aff = AffineHull(pts)
        self.dim = self.aff.dim
        k = self.dim
        if k == 0:
            self.vertices = (pts[0],)
            self.ineqs = []
            self.facets = []
            return
        local = [self.aff.local(p) for p in pts]
        den = el.lcm_denominators([x for c in local for x in c])
        gens = [tuple(int(x * den) for x in c) + (den,) for c in local]
        normals = cone_facets(gens)
        tight = [[i for i, g in enumerate(gens) if el.dot(nrm, g) == 0] for nrm in normals]
        keep = []
        for i, g in enumerate(gens):
            tn = [list(nrm) for nrm, t in zip(normals, tight) if i in t]
            if len(tn) >= k and el.rank(tn) == k:
                keep.append(i)
        self.vertices = tuple(pts[i] for i in keep)
        pos = {i: j for j, i in enumerate(keep)}
        self.ineqs = []
        self.facets = []
        for nrm in normals:
            alpha = nrm[:-1]
            beta = nrm[-1]
            self.ineqs.append(self.aff.lift_normal(alpha, beta))
            self.facets.append(frozenset(pos[i] for i in range(len(gens)) if i in pos and el.dot(nrm, gens[i]) == 0))

    # -- basic predicates
    def __repr__(self):
        return f"RationalPolytope(dim={self.dim}, vertices={len(self.vertices)})"

    def __eq__(self, o):
        return isinstance(o, RationalPolytope) and self.vertices == o.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def eqs(self) -> list:
        return self.aff.eqs

    def contains(self, x) -> bool:
        x = el.rat_vector(x)
        return self.aff.contains(x) and all(el.dot(a, x) >= b for a, b in self.ineqs)

    def contains_relint(self, x) -> bool:
        x = el.rat_vector(x)
        return self.aff.contains(x) and all(el.dot(a, x) > b for a, b in self.ineqs)

    @cached_property
    def barycenter(self) -> tuple:
        m = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / m for i in range(self.n))

    def is_lattice(self) -> bool:
        return all(el.is_integral(v) for v in self.vertices)

    def is_simplex(self) -> bool:
        return len(self.vertices) == self.dim + 1

    def vertex_index(self, v) -> int:
        return self.vertices.index(el.rat_vector(v))

    # -- faces
    @cached_property
    def faces(self) -> list:
        """All nonempty faces as vertex-index frozensets, sorted by dimension then lexicographically."""
        top = frozenset(range(len(self.vertices)))
        seen = {top}
        frontier = [top]
        while frontier:
            nxt = []
            for f in frontier:
                for fac in self.facets:
                    g = f & fac
                    if g and g not in seen:
                        seen.add(g)
                        nxt.append(g)
            frontier = nxt
        return sorted(seen, key=lambda f: (self.face_dim(f), sorted(f)))

    def face_dim(self, f) -> int:
        pts = [self.vertices[i] for i in sorted(f)]
        if len(pts) <= 1:
            return len(pts) - 1
        return el.rank([list(el.vsub(p, pts[0])) for p in pts[1:]])

    @cached_property
    def _face_dims(self) -> dict:
        return {f: self.face_dim(f) for f in self.faces}

    def faces_of_dim(self, k: int) -> list:
        return [f for f in self.faces if self._face_dims[f] == k]

    def subfaces(self, f) -> list:
        """Facets of the face f."""
        d = self._face_dims[f]
        return [g for g in self.faces if g < f and self._face_dims[g] == d - 1]

    def face_polytope(self, f) -> "RationalPolytope":
        return RationalPolytope([self.vertices[i] for i in sorted(f)])

    # -- triangulation by pulling the least vertex
    @cached_property
    def pulling_triangulation(self) -> list:
        memo = {}

        def tri(f):
            if f in memo:
                return memo[f]
            d = self._face_dims[f]
            if len(f) == d + 1:
                out = [f]
            else:
                v = min(f)
                out = []
                for g in self.subfaces(f):
                    if v not in g:
                        out.extend(s | {v} for s in tri(g))
            memo[f] = out
            return out

        return tri(frozenset(range(len(self.vertices))))

    # -- action
    def image(self, g: AffineMap) -> "RationalPolytope":
        return RationalPolytope([g(v) for v in self.vertices])

    def is_invariant(self, g: AffineMap) -> bool:
        vs = set(self.vertices)
        return all(g(v) in vs for v in self.vertices)

    def vertex_permutation(self, g: AffineMap) -> list:
        return [self.vertex_index(g(v)) for v in self.vertices]


def hull(points: Sequence) -> RationalPolytope:
    return RationalPolytope(points)


def fixed_polytope(P: RationalPolytope, g: AffineMap) -> RationalPolytope:
    """P^g as the hull of the <g>-orbit averages of the vertices."""
    if not P.is_invariant(g):
        raise NotInvariant("polytope is not invariant under g")
    k = g.order()
    avgs = []
    for v in P.vertices:
        s = [Fraction(0)] * P.n
        w = v
        for _ in range(k):
            s = [a + b for a, b in zip(s, w)]
            w = g(w)
        avgs.append(tuple(a / k for a in s))
    return RationalPolytope(avgs)


# ---------------------------------------------------------------- lattices of affine spans

def direction_lattice(P: RationalPolytope) -> list:
    """Z-basis of span(P - P) ∩ Z^n."""
    return el.saturate([list(b) for b in P.aff.basis], P.n)


def normalized_volume(P: RationalPolytope, full: bool = True) -> Fraction:
    """dim! times the volume, measured in the lattice span(P - P) ∩ Z^n.

    With ``full`` the polytope must be full-dimensional in Z^n.
    """
    if full and P.dim != P.n:
        raise DimensionMismatch(f"dim {P.dim} polytope in Z^{P.n}")
    if P.dim == 0:
        return Fraction(1)
    basis = direction_lattice(P)
    bt = el.transpose(basis)
    total = Fraction(0)
    for s in P.pulling_triangulation:
        vs = [P.vertices[i] for i in sorted(s)]
        rows = [el.solve_rational(bt, list(el.vsub(v, vs[0]))) for v in vs[1:]]
        total += abs(Fraction(el.det([list(r) for r in rows])))
    return total


def simplex_volume(vertices: Sequence) -> Fraction:
    """|det| of edge vectors of a full-dimensional simplex in Q^n."""
    v0 = vertices[0]
    return abs(Fraction(el.det([list(el.vsub(v, v0)) for v in vertices[1:]])))


def _affine_lattice(P: RationalPolytope, m: int):
    """Integer points of aff(mP): (x0, K) with x = x0 + y·K, or None when empty."""
    n = P.n
    if not P.eqs:
        return tuple([0] * n), el.identity(n)
    a = [list(e[0]) for e in P.eqs]
    b = [e[1] * m for e in P.eqs]
    x0 = el.solve_integer(a, b)
    if x0 is None:
        return None
    return x0, el.integer_kernel(a, n)


def lattice_points(P: RationalPolytope, m: int = 1, interior: bool = False) -> list:
    """Points of P ∩ (1/m)Z^n (relative interior only when ``interior``), lexicographically sorted."""
    if m < 1:
        raise ValueError("dilate must be positive")
    found = _affine_lattice(P, m)
    if found is None:
        return []
    x0, K = found
    k = len(K)
    if k == 0:
        x = tuple(Fraction(c, m) for c in x0)
        ok = P.contains_relint(x) if interior else P.contains(x)
        return [x] if ok else []
    kt = el.transpose(K)
    ys = [el.solve_rational(kt, [v[i] * m - x0[i] for i in range(P.n)]) for v in P.vertices]
    lo = [math.floor(min(y[j] for y in ys)) for j in range(k)]
    hi = [math.ceil(max(y[j] for y in ys)) for j in range(k)]
    # inequalities in y: (a K^T)·y >= m b - a·x0 ; integral after clearing b denominators
    rows, rhs = [], []
    for a, b in P.ineqs:
        coeff = [el.dot(a, K[j]) for j in range(k)]
        r = m * b - el.dot(a, x0)
        rows.append(coeff)
        rhs.append(math.ceil(r) if not interior else math.floor(r) + 1)
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    total = math.prod(sizes)
    bound = max([abs(x) for r in rows for x in r] + [1]) * max([abs(x) for x in lo + hi] + [1]) * k
    out = []
    if total > 2000 and bound < 2 ** 60 and max(abs(x) for x in rhs + [1]) < 2 ** 60:
        grids = np.meshgrid(*[np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)], indexing="ij")
        Y = np.stack([g.ravel() for g in grids], axis=1)
        mask = np.ones(len(Y), dtype=bool)
        for r, c in zip(rows, rhs):
            mask &= Y @ np.array(r, dtype=np.int64) >= c
        sel = [tuple(int(v) for v in y) for y in Y[mask]]
    else:
        sel = [y for y in itertools.product(*[range(l, h + 1) for l, h in zip(lo, hi)])
               if all(el.dot(r, y) >= c for r, c in zip(rows, rhs))]
    for y in sel:
        x = el.vadd(x0, el.vecmat(list(y), K))
        out.append(tuple(Fraction(c, m) for c in x))
    return sorted(out)


def count_lattice_points(P: RationalPolytope, m: int = 1, interior: bool = False) -> int:
    return len(lattice_points(P, m, interior))


def codegree(P: RationalPolytope) -> int:
    """Least m with a point of (1/m)Z^n in the relative interior of P."""
    for m in range(1, P.dim + 2):
        if lattice_points(P, m, interior=True):
            return m
    raise AssertionError("no interior point found up to dim+1")


def degree(P: RationalPolytope) -> int:
    return P.dim + 1 - codegree(P)


# ---------------------------------------------------------------- charts

class NotLatticeMap(ValueError):
    pass


class LatticeChart:
    """Standard coordinates for aff(points) ∩ Λ, where Λ = offset + Z-span(lattice rows).

    ``to_local`` maps an ambient point to Z^k coordinates, ``from_local`` inverts it,
    and ``local_map`` transports an ambient affine map preserving the chart.
    """

    def __init__(self, points: Sequence, lattice: Optional[el.LatticeBasis] = None):
        pts = [el.rat_vector(p) for p in points]
        n = len(pts[0])
        lat = lattice or el.LatticeBasis.standard(n)
        self.lattice = lat
        self.n = n
        self.L = [list(r) for r in lat.basis]
        self.off = lat.offset or tuple([Fraction(0)] * n)
        cs = [self._lat_coords(p) for p in pts]
        r = len(self.L)
        integral = sorted(c for c in cs if el.is_integral(c))
        if integral:
            c0 = integral[0]
        else:
            hullc = AffineHull(cs)
            a = [list(e[0]) for e in hullc.eqs]
            b = [e[1] for e in hullc.eqs]
            c0 = el.solve_integer(a, b) if a else tuple([0] * r)
            if c0 is None:
                raise ValueError("affine span contains no lattice point")
        self.c0 = tuple(Fraction(x) for x in c0)
        diffs = [list(el.vsub(c, self.c0)) for c in cs]
        self.D = el.saturate(diffs, r)
        self.k = len(self.D)
        self._dt = el.transpose(self.D) if self.D else []

    def _lat_coords(self, x) -> tuple:
        c = el.solve_rational(el.transpose(self.L), list(el.vsub(el.rat_vector(x), self.off)))
        if c is None:
            raise ValueError(f"{x} is not in the span of the lattice")
        return c

    def to_local(self, x) -> tuple:
        c = el.vsub(self._lat_coords(x), self.c0)
        if self.k == 0:
            return ()
        y = el.solve_rational(self._dt, list(c))
        if y is None:
            raise ValueError(f"{x} is not in the affine span")
        return y

    def from_local(self, y) -> tuple:
        c = el.vadd(self.c0, el.vecmat(list(y), self.D)) if self.k else self.c0
        return el.vadd(self.off, el.vecmat(list(c), self.L))

    def local_map(self, linear, translation) -> AffineMap:
        lin = [[Fraction(x) for x in r] for r in linear]
        tr = [Fraction(x) for x in translation]

        def g(x):
            return tuple(el.dot(r, x) + t for r, t in zip(lin, tr))

        b = self.to_local(g(self.from_local([0] * self.k)))
        cols = []
        for j in range(self.k):
            e = [0] * self.k
            e[j] = 1
            cols.append(el.vsub(self.to_local(g(self.from_local(e))), b))
        A = el.transpose([list(c) for c in cols]) if cols else []
        if not el.is_integral(b) or any(not el.is_integral(r) for r in A):
            raise NotLatticeMap("map does not preserve the lattice chart")
        return AffineMap.from_parts([[int(x) for x in r] for r in A], [int(x) for x in b])


def quotient_projection(v: Sequence[int]) -> list:
    """Integer matrix of a surjection Z^n -> Z^{n-1} with kernel Z v (v primitive)."""
    v = [int(x) for x in v]
    diag, u, V = el.snf([v])
    if diag[0] != 1:
        raise ValueError("vector is not primitive")
    return [[V[i][j] for i in range(len(v))] for j in range(1, len(v))]


def induced_on_quotient(proj: list, A: list) -> list:
    """Matrix of the map induced by A (acting on columns) on Z^n / ker(proj)."""
    k = len(proj)
    cols = []
    for j in range(k):
        e = [0] * k
        e[j] = 1
        x = el.solve_integer(proj, e)
        cols.append(el.matvec(proj, el.matvec(A, x)))
    return el.transpose(cols)
