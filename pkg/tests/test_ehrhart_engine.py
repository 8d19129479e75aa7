import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eqehrhart import exactlin as el
from eqehrhart.ehrhart_engine import (box_points, equivariant_ehr, equivariant_L, polytope_ehr_series,
                                      polytope_interior_series, simplex_ehr_series)
from eqehrhart.polytope import RationalPolytope, lattice_points
from eqehrhart.ratfunc import Poly, RatFunc

from conftest import corpus


def brute_count(P, m, interior=False):
    """Points of P ∩ (1/m)Z^n by scanning the bounding box (independent of the Ehrhart engine)."""
    lo = [min(v[i] for v in P.vertices) for i in range(P.n)]
    hi = [max(v[i] for v in P.vertices) for i in range(P.n)]
    rng = [range(int((l * m).__floor__()), int((h * m).__ceil__()) + 1) for l, h in zip(lo, hi)]
    test = P.contains_relint if interior else P.contains
    return sum(1 for x in itertools.product(*rng) if test(tuple(Fraction(c, m) for c in x)))


rat = st.fractions(min_value=-2, max_value=2, max_denominator=3)


@given(st.lists(st.tuples(rat, rat), min_size=3, max_size=6, unique=True))
@settings(max_examples=30, deadline=None)
def test_rational_polygon_series_matches_enumeration(pts):
    P = RationalPolytope(pts)
    assume(P.dim == 2)
    ser = polytope_ehr_series(P).series(6)
    assert ser[0] == 1
    for m in range(1, 6):
        assert ser[m] == brute_count(P, m)
    inner = polytope_interior_series(P).series(5)
    for m in range(1, 5):
        assert inner[m] == brute_count(P, m, interior=True)


def test_unit_square_series():
    P = RationalPolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    f = polytope_ehr_series(P) * RatFunc.from_poly(Poly([1, -1]) ** 3)
    assert f.reduced().as_poly() == Poly([1, 1])


def test_box_points_count_is_index():
    rays = [(1, 0, 1), (1, 2, 1)]
    # cone over the segment [(1,0),(1,2)] at height one: one extra box point (1,1,1)
    pts = box_points(rays)
    assert len(pts) == 2
    assert [b.point for b in box_points(rays, fully_open=True)] == [(1, 1, 1)]
    assert box_points(rays, fully_open=True)[0].height == 1


@given(st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=3, max_size=3, unique=True))
def test_box_size_equals_determinant(vs):
    rays = [v + (1,) for v in vs]
    assume(el.rank([list(r) for r in rays]) == 3)
    basis = el.saturate([list(r) for r in rays], 4)
    coords = [el.solve_rational(el.transpose(basis), list(r)) for r in rays]
    assert len(box_points(rays)) == abs(el.det([list(c) for c in coords]))


def test_simplex_series_of_dilated_triangle():
    f = simplex_ehr_series([(0, 0), (2, 0), (0, 2)])
    assert f.series(4) == [1, 6, 15, 28]


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_equivariant_series_matches_fixed_point_counts(inst):
    ser = equivariant_ehr(inst.polytope, inst.group)
    for m in range(1, 4):
        assert ser.coefficient(m) == equivariant_L(inst.polytope, inst.group, m)
