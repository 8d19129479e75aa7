import itertools
from fractions import Fraction

import pytest

from eqehrhart.fixtures import bipyramid_s1, p5_triangulation
from eqehrhart.group_action import AffineMap, close_group
from eqehrhart.hstar import hstar, hstar_N, psi_int
from eqehrhart.polytope import RationalPolytope
from eqehrhart.sr_formula import (NotStabilized, SimplicialFan, box_orbits, ehr_via_triangulation,
                                  hstar_via_triangulation, link_hilbert_at_g, volume_check)
from eqehrhart.triangulate import PolyComplex, invariant_triangulation, trivial_subdivision

from conftest import corpus_instance, random_instances


def segment(a):
    P = RationalPolytope([(0,), (a,)])
    G = close_group([AffineMap.from_parts([[-1]], [a])])
    return P, G


def sr_trace_by_enumeration(fan, g, degree):
    """Trace of g on degree-k part of the SR ring: g-fixed monomials supported on a face."""
    verts = fan.T.vertex_indices
    perm = fan.perm[g]
    out = []
    for k in range(degree):
        n = 0
        for exps in itertools.product(range(k + 1), repeat=len(verts)):
            if sum(exps) != k:
                continue
            mono = dict(zip(verts, exps))
            supp = frozenset(v for v, e in mono.items() if e)
            if supp and supp not in fan.cone_set:
                continue
            if all(mono[perm[v]] == mono[v] for v in verts):
                n += 1
        out.append(n)
    return out


def test_swapped_rays_give_geometric_series_in_t_squared():
    P, G = segment(1)
    fan = SimplicialFan(trivial_subdivision(P), G)
    f = link_hilbert_at_g(fan, frozenset(), 1)
    assert f.series(8) == [1, 0, 1, 0, 1, 0, 1, 0]
    assert f.series(8) == sr_trace_by_enumeration(fan, 1, 8)
    assert link_hilbert_at_g(fan, frozenset(), 0).series(8) == sr_trace_by_enumeration(fan, 0, 8)


def test_sr_trace_on_bipyramid_matches_enumeration():
    inst = corpus_instance("bipyramid")
    fan = SimplicialFan(bipyramid_s1(inst), inst.group)
    for g in range(inst.group.order):
        assert link_hilbert_at_g(fan, frozenset(), g).series(5) == sr_trace_by_enumeration(fan, g, 5)


def test_box_point_of_long_segment():
    P = RationalPolytope([(0,), (2,)])
    G = close_group([], dim=1)
    fan = SimplicialFan(trivial_subdivision(P), G)
    heights = sorted(o.height for o in box_orbits(fan, G))
    assert heights == [0, 1]
    h = hstar_via_triangulation(P, G, trivial_subdivision(P), 1)
    assert h == hstar(P, G)


def test_unimodular_fan_has_single_box_orbit():
    inst = corpus_instance("p5_reflexive")
    fan = SimplicialFan(p5_triangulation(inst), inst.group)
    orbs = box_orbits(fan, inst.group)
    assert len(orbs) == 1 and orbs[0].height == 0 and orbs[0].size == 1


def test_not_stabilized():
    P, G = segment(1)
    fan = SimplicialFan(trivial_subdivision(P), G)
    with pytest.raises(NotStabilized):
        link_hilbert_at_g(fan, frozenset([0]), 1)


def test_orbit_form_equals_fast_form():
    inst = corpus_instance("bipyramid")
    fan = SimplicialFan(bipyramid_s1(inst), inst.group)
    a = ehr_via_triangulation(fan, inst.group)
    b = ehr_via_triangulation(fan, inst.group, use_orbits=True)
    assert a == b


@pytest.mark.parametrize("name,N", [("z3_prism_quotient", 3), ("square_swap", 2), ("cross_polytope_2d", 2)])
def test_sr_equals_direct(name, N):
    inst = corpus_instance(name)
    P, G = inst.polytope, inst.group
    T = invariant_triangulation(P, G, N)
    h = hstar_via_triangulation(P, G, T, N)
    assert h == psi_int(hstar_N(P, G, N))
    assert volume_check(P, h)


@pytest.mark.parametrize("inst", [i for i in random_instances() if i.polytope.dim <= 2][:6], ids=lambda i: i.name)
def test_sr_equals_direct_on_random_instances(inst):
    P, G = inst.polytope, inst.group
    T = invariant_triangulation(P, G, G.order)
    assert hstar_via_triangulation(P, G, T) == psi_int(hstar_N(P, G, T.N))
