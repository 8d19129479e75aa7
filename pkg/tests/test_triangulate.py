import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eqehrhart import exactlin as el
from eqehrhart.fixtures import bipyramid_s1, bipyramid_s2
from eqehrhart.group_action import AffineMap, close_group
from eqehrhart.polytope import RationalPolytope, normalized_volume
from eqehrhart.triangulate import (HypothesisViolated, NotTranslative, PolyComplex, dim2_classify,
                                   greedy_lattice_triangulation, invariant_triangulation, is_translative,
                                   orbit_pull_triangulate, pull_point, pulling_refinement, regular_subdivision,
                                   simplex_det, square_obstruction, translative_refine, trivial_subdivision,
                                   verify_triangulation)

from conftest import corpus_instance

SQUARE = RationalPolytope([(0, 0), (1, 0), (0, 1), (1, 1)])


def cell_sets(S):
    return {frozenset(S.points[i] for i in c) for c in S.cells}


def is_lower_face(points, heights, cell):
    """An affine function equal to the heights on ``cell`` and strictly below them elsewhere (2D)."""
    cp = [p for p in points if p in cell]
    A = [[p[0], p[1], 1] for p in cp]
    rhs = [heights[p] for p in cp]
    sol = el.solve_rational(A, rhs)
    if sol is None:
        return False
    f = lambda p: sol[0] * p[0] + sol[1] * p[1] + sol[2]
    hull = RationalPolytope(list(cell))
    return all(f(p) <= heights[p] if hull.contains(p) else f(p) < heights[p] for p in points)


def test_zero_heights_give_trivial_subdivision():
    S = regular_subdivision(SQUARE, {v: 0 for v in SQUARE.vertices})
    assert cell_sets(S) == cell_sets(trivial_subdivision(SQUARE))


def test_lowering_one_vertex_splits_square():
    S = regular_subdivision(SQUARE, {(0, 0): -1})
    assert len(S.cells) == 2 and S.is_triangulation()
    assert all((Fraction(0), Fraction(0)) in c for c in cell_sets(S))


def test_pulling_center_gives_four_triangles():
    big = RationalPolytope([(0, 0), (2, 0), (0, 2), (2, 2)])
    S = pull_point(trivial_subdivision(big), (1, 1))
    assert len(S.cells) == 4 and S.is_triangulation()
    R = pulling_refinement(trivial_subdivision(big), [(1, 1)])
    assert cell_sets(R) == cell_sets(S)


def test_pulling_a_simplex_vertex_is_identity():
    tri = RationalPolytope([(0, 0), (1, 0), (0, 1)])
    S = trivial_subdivision(tri)
    assert cell_sets(pull_point(S, (0, 0))) == cell_sets(S)


@given(st.dictionaries(st.sampled_from(list(itertools.product(range(3), repeat=2))),
                       st.integers(-6, 6), min_size=1))
@settings(max_examples=60, deadline=None)
def test_regular_subdivision_cells_are_lower_faces(h):
    P = RationalPolytope([(0, 0), (2, 0), (0, 2), (2, 2)])
    S = regular_subdivision(P, h)
    pts = [tuple(Fraction(x) for x in p) for p in itertools.product(range(3), repeat=2)]
    heights = {p: Fraction(h.get(tuple(int(x) for x in p), 0)) for p in pts}
    pts = [p for p in pts if p in heights and (tuple(int(x) for x in p) in h or p in P.vertices)]
    for c in cell_sets(S):
        assert is_lower_face(pts, heights, c)
    total = sum(normalized_volume(RationalPolytope(list(c))) for c in cell_sets(S))
    assert total == normalized_volume(P)


@given(st.sampled_from(list(itertools.product(range(3), repeat=2))))
@settings(max_examples=20, deadline=None)
def test_local_pull_rule_equals_lower_hull(u):
    P = RationalPolytope([(0, 0), (2, 0), (0, 2), (2, 2)])
    S = trivial_subdivision(P)
    assert cell_sets(pull_point(S, u)) == cell_sets(pulling_refinement(S, [u]))


def test_translativity():
    sq = trivial_subdivision(SQUARE)
    swap = close_group([AffineMap.from_parts([[0, 1], [1, 0]])])
    ok, wit = is_translative(sq, swap)
    assert not ok and wit["g"] != 0
    with pytest.raises(NotTranslative):
        translative_refine(sq, swap)
    trivial = close_group([], dim=2)
    T = translative_refine(sq, trivial)
    assert T.is_triangulation() and len(T.cells) == 2
    inst = corpus_instance("bipyramid")
    assert not is_translative(bipyramid_s1(inst), inst.group)[0]


def test_square_obstruction_witnesses():
    for name in ("klein_cube", "z3_prism_quotient"):
        inst = corpus_instance(name)
        w = square_obstruction(trivial_subdivision(inst.polytope), inst.group)
        assert w is not None
        g1 = inst.group.elements[w["g1"]]
        e1 = [tuple(p) for p in w["edge1"]]
        assert g1(e1[0]) == e1[1]
    inst = corpus_instance("bipyramid")
    assert square_obstruction(bipyramid_s2(inst), inst.group) is not None


def test_orbit_pull_cube():
    inst = corpus_instance("klein_cube")
    T = invariant_triangulation(inst.polytope, inst.group, 4)
    rep = verify_triangulation(T, inst.polytope, inst.group, 4)
    assert rep["ok"] and len(T.cells) == 20
    with pytest.raises(HypothesisViolated) as exc:
        invariant_triangulation(inst.polytope, inst.group, 1, force=True)
    assert exc.value.step >= 1


def test_orbit_pull_explicit_sequence_fails_on_bad_step():
    inst = corpus_instance("z3_prism_quotient")
    bad = inst.polytope.vertices[0]
    with pytest.raises(HypothesisViolated):
        orbit_pull_triangulate(inst.polytope, inst.group, [bad])


def test_verify_rejects_broken_triangulations():
    T = regular_subdivision(SQUARE, {(0, 0): -1})
    assert verify_triangulation(T, SQUARE)["ok"]
    # drop a cell: volume fails
    half = PolyComplex(T.points, T.cells[:1])
    assert not verify_triangulation(half, SQUARE)["ok"]
    # overlapping: both diagonals
    other = regular_subdivision(SQUARE, {(1, 0): -1})
    both = PolyComplex(T.points, list(T.cells) + [frozenset(other.index[p] for p in c) for c in cell_sets(other)])
    rep = verify_triangulation(both, SQUARE)
    assert not rep["ok"] and not rep["pairwise"]
    # a diagonal is not invariant under the quarter turn about the centre
    rot = close_group([AffineMap.from_parts([[0, -1], [1, 0]], [1, 0])])
    rep = verify_triangulation(T, SQUARE, rot)
    assert not rep["invariant"] and not rep["ok"]
    # non-simplex cell
    assert not verify_triangulation(trivial_subdivision(SQUARE), SQUARE)["ok"]


def test_json_and_off_round_trip():
    inst = corpus_instance("z3_prism_quotient")
    T = invariant_triangulation(inst.polytope, inst.group, 3)
    data = json.loads(json.dumps(T.to_json(inst.group, 3)))
    assert data["N"] == 3 and len(data["facets"]) == len(T.cells)
    R = PolyComplex.from_json(data)
    assert R.same_cells(T)
    off = T.to_off().splitlines()
    assert off[0] == "OFF" or off[0].startswith("OFF")


def test_dim2_classify_forbidden_types():
    from eqehrhart.instances import dim2_catalog
    cat = {i.name: i for i in dim2_catalog()}
    assert dim2_classify(cat["rot90_half_center"].group)["type"] == "rotation90_half"
    assert dim2_classify(cat["reflection_x_half"].group)["type"] == "reflection_half"
    assert dim2_classify(cat["swap_square"].group)["triangulable"]
    T = greedy_lattice_triangulation(cat["swap_square"].polytope, cat["swap_square"].group)
    assert T is not None and verify_triangulation(T, cat["swap_square"].polytope, cat["swap_square"].group)["ok"]
    assert greedy_lattice_triangulation(cat["rot90_half_center"].polytope, cat["rot90_half_center"].group) is None


def test_simplex_det():
    assert simplex_det([(0, 0), (2, 0), (0, 3)]) == 6
