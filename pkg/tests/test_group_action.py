import itertools

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from eqehrhart.group_action import (AffineMap, NotInvertible, OrderExceeded, char_poly_tilde, charpoly,
                                    close_group, cyclotomic, det_poly, direct_product, fixed_point, orbit)
from eqehrhart.ratfunc import Poly

from conftest import corpus

t = sympy.Symbol("t")


def signed_perms(d):
    for p in itertools.permutations(range(d)):
        for s in itertools.product([1, -1], repeat=d):
            yield [[s[i] if p[i] == j else 0 for j in range(d)] for i in range(d)]


def test_composition_convention():
    f = AffineMap.from_parts([[0, 1], [1, 0]], [1, 0])
    g = AffineMap.from_parts([[1, 0], [0, 1]], [0, 5])
    x = (2, 3)
    assert (f @ g)(x) == f(g(x))
    assert f.inverse() @ f == AffineMap.identity(2)


def test_non_invertible_rejected():
    with pytest.raises(NotInvertible):
        AffineMap.from_parts([[2, 0], [0, 1]]).inverse()


def test_translation_has_infinite_order():
    with pytest.raises(OrderExceeded):
        close_group([AffineMap.from_parts([[1]], [1])], max_order=50)


@pytest.mark.parametrize("inst", corpus(), ids=lambda i: i.name)
def test_group_tables_consistent(inst):
    G = inst.group
    n = G.order
    assert G.elements[0] == AffineMap.identity(G.dim)
    for i in range(n):
        assert G.mult[i][G.inv[i]] == 0
        assert G.elements[i].order() == G.orders[i]
    # class equation and classes are conjugation orbits
    assert sum(G.class_sizes) == n
    for c in G.classes:
        assert n % len(c) == 0
        r = c[0]
        assert set(c) == {G.conjugate(x, r) for x in range(n)}
    assert all(G.exponent % o == 0 for o in G.orders)


@given(st.sampled_from(list(signed_perms(3))))
def test_charpoly_matches_sympy(m):
    ours = charpoly(m)
    ref = sympy.Poly(sympy.Matrix(m).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert [int(x) for x in ours.c] == [int(x) for x in ref]


@given(st.sampled_from(list(signed_perms(3))), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_det_poly_factors_into_cyclotomics(m, b):
    g = AffineMap.from_parts(m, b)
    fac = char_poly_tilde(g)
    prod = Poly([1])
    for k, e in fac.items():
        prod = prod * cyclotomic(k) ** e
    assert prod == charpoly(g.ext)
    assert fac[1] >= 1
    # det(I - g t) for g̃ equals (1 - t) det(I - A t)
    assert det_poly(g) == charpoly(m).reversed(3) * Poly([1, -1])


def test_fixed_point_of_half_turn():
    g = AffineMap.from_parts([[-1, 0], [0, -1]], [1, 1])
    fs = fixed_point(g)
    assert fs.unique and fs.point == (sympy.Rational(1, 2), sympy.Rational(1, 2))
    assert fs.lattice_point is None and fs.denominator == 2
    refl = AffineMap.from_parts([[-1, 0], [0, 1]], [0, 0])
    fs = fixed_point(refl)
    assert fs.dim == 1 and fs.lattice_point is not None


def test_orbit_and_direct_product():
    swap = close_group([AffineMap.from_parts([[0, 1], [1, 0]])])
    assert orbit(swap, (1, 0)) == [(0, 1), (1, 0)]
    from eqehrhart.hstar import join_map
    G = direct_product(swap, swap, lambda a, b: join_map(swap.elements[a], swap.elements[b]))
    assert G.order == 4 and len(G.classes) == 4
    assert G.elements[1 * 2 + 1] == join_map(swap.elements[1], swap.elements[1])
