"""Explicit triangulations used as test fixtures."""

from __future__ import annotations

from .instances import Instance
from .triangulate import PolyComplex, orbit_points, orbit_pull_triangulate, pulling_refinement, trivial_subdivision

# Boundary simplices of the non-regular invariant triangulation of the p = 5 polytope, one per orbit.
P5_ORBIT_REPS = [
    ("e1", "f2", "e3", "f3"),
    ("e1", "f2", "f1", "f3"),
    ("e1", "f2", "e3", "f5"),
    ("e1", "f2", "f1", "f5"),
    ("e1", "e3", "f3", "f5"),
]


def complex_from_cells(cells) -> PolyComplex:
    pts = sorted({x for c in cells for x in c})
    idx = {x: i for i, x in enumerate(pts)}
    return PolyComplex(pts, [frozenset(idx[x] for x in c) for c in cells])


def p5_triangulation(inst: Instance) -> PolyComplex:
    """Cone from the interior lattice point over the invariant boundary triangulation (25 simplices)."""
    apex = inst.to_local((0, 0, 0, 0))
    cells = set()
    for rep in P5_ORBIT_REPS:
        pts = [inst.labels[x] for x in rep] + [apex]
        for g in inst.group.elements:
            cells.add(frozenset(g(x) for x in pts))
    return complex_from_cells(cells)


def barycentric_triangulation(inst: Instance) -> PolyComplex:
    """Pull by the orbits of face barycenters, largest faces first."""
    P = inst.polytope
    seq, seen = [], set()
    for k in range(P.dim, 0, -1):
        for f in P.faces_of_dim(k):
            b = P.face_polytope(f).barycenter
            if b not in seen:
                seq.append(b)
                seen.update(orbit_points(inst.group, b))
    return orbit_pull_triangulate(P, inst.group, seq)


def bipyramid_s1(inst: Instance) -> PolyComplex:
    """Pulling refinement by both apexes: four simplices Conv(edge of the square, a, b)."""
    apexes = [inst.to_local((0, 0, 1)), inst.to_local((1, 1, -1))]
    return pulling_refinement(trivial_subdivision(inst.polytope), apexes)


def bipyramid_s2(inst: Instance) -> PolyComplex:
    """Pulling refinement by the square's vertices: two square pyramids."""
    square = [inst.to_local(v) for v in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]]
    return pulling_refinement(trivial_subdivision(inst.polytope), square)
