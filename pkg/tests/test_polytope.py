import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from eqehrhart.group_action import AffineMap
from eqehrhart.polytope import (LatticeChart, RationalPolytope, codegree, fixed_polytope, lattice_points,
                                normalized_volume, quotient_projection)

coord = st.integers(-3, 3)


@st.composite
def point_sets(draw, d):
    pts = draw(st.lists(st.tuples(*[coord] * d), min_size=d + 1, max_size=8, unique=True))
    return pts


def in_hull_lp(pts, x) -> bool:
    """Feasibility of x = Σ λ_i p_i, λ ≥ 0, Σ λ = 1 (float oracle on small integer data)."""
    A = np.array(pts, dtype=float).T
    A_eq = np.vstack([A, np.ones(len(pts))])
    b_eq = np.append(np.array(x, dtype=float), 1.0)
    res = linprog(np.zeros(len(pts)), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * len(pts), method="highs")
    return res.status == 0


@given(point_sets(3))
@settings(max_examples=40, deadline=None)
def test_vertices_and_volume_match_qhull(pts):
    arr = np.array(pts, dtype=float)
    assume(np.linalg.matrix_rank(arr[1:] - arr[0]) == 3)
    P = RationalPolytope(pts)
    hull = ConvexHull(arr)
    assert sorted(tuple(int(x) for x in arr[i]) for i in hull.vertices) == sorted(tuple(int(x) for x in v) for v in P.vertices)
    assert abs(float(normalized_volume(P)) - 6 * hull.volume) < 1e-7
    # Euler relation on the face lattice of a 3-polytope
    f = [len(P.faces_of_dim(k)) for k in range(3)]
    assert f[0] - f[1] + f[2] == 2


@given(point_sets(2))
@settings(max_examples=40, deadline=None)
def test_lattice_points_match_lp_membership(pts):
    P = RationalPolytope(pts)
    for m in (1, 2):
        ours = set(lattice_points(P, m))
        grid = set()
        for x in itertools.product(range(-3 * m, 3 * m + 1), repeat=2):
            y = (Fraction(x[0], m), Fraction(x[1], m))
            if in_hull_lp(pts, [float(c) for c in y]):
                grid.add(y)
        assert ours == grid


def test_lower_dimensional_counts():
    seg = RationalPolytope([(0, 0, 0), (2, 2, 2)])
    assert len(lattice_points(seg, 1)) == 3
    assert len(lattice_points(seg, 1, interior=True)) == 1
    tri = RationalPolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert normalized_volume(tri, full=False) == 1
    assert codegree(tri) == 3


def test_codegree_of_cube_and_reflexive():
    cube = RationalPolytope(list(itertools.product([0, 1], repeat=3)))
    assert codegree(cube) == 2
    assert codegree(RationalPolytope([(-1, -1), (1, -1), (-1, 1), (1, 1)])) == 1


def test_fixed_polytope_of_swap():
    P = RationalPolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    g = AffineMap.from_parts([[0, 1], [1, 0]])
    F = fixed_polytope(P, g)
    assert F.dim == 1 and set(F.vertices) == {(0, 0), (1, 1)}
    assert P.is_invariant(g)


def test_chart_round_trip_and_quotient():
    proj = quotient_projection([1, 1, 1])
    assert len(proj) == 2
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    ch = LatticeChart(pts)
    for p in pts:
        assert ch.from_local(ch.to_local(p)) == tuple(Fraction(x) for x in p)
    loc = RationalPolytope([ch.to_local(p) for p in pts])
    assert loc.dim == loc.n == 2 and normalized_volume(loc) == 1


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_simplex_faces(d):
    pts = [tuple([0] * d)] + [tuple(int(i == j) for j in range(d)) for i in range(d)]
    P = RationalPolytope(pts)
    assert len(P.faces) == 2 ** (d + 1) - 1
    assert P.is_simplex() and P.is_lattice()
    assert normalized_volume(P) == 1
    assert len(P.facets) == d + 1
    assert math.comb(d + 1, 2) == len(P.faces_of_dim(1))
