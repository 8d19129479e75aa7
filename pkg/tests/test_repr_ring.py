import pytest
from hypothesis import given
from hypothesis import strategies as st

from eqehrhart.group_action import AffineMap, close_group
from eqehrhart.repr_ring import (ClassFunction, Cyclo, NotVirtualCharacter, char_table_abelian,
                                 char_table_dihedral, cycle_type, decompose, format_class_function, induce,
                                 inner_product, is_effective, partitions, perm_character, recompose,
                                 sn_character)

from conftest import corpus


@given(st.integers(1, 12), st.integers(0, 30), st.integers(0, 30))
def test_roots_of_unity_multiply(e, a, b):
    assert Cyclo.root(e, a) * Cyclo.root(e, b) == Cyclo.root(e, a + b)
    assert Cyclo.root(e, a) * Cyclo.root(e, a).conj() == Cyclo.rational(1)


@given(st.integers(2, 12))
def test_sum_of_primitive_roots_is_mobius(e):
    total = Cyclo.rational(0)
    for k in range(e):
        total = total + Cyclo.root(e, k)
    assert total == Cyclo.rational(0)


def test_lift_preserves_value():
    z = Cyclo.root(3, 1)
    assert z.lift(6) == Cyclo.root(6, 2)


@pytest.mark.parametrize("inst", [i for i in corpus() if i.table is not None], ids=lambda i: i.name)
def test_tables_orthonormal_and_complete(inst):
    T = inst.table
    G = inst.group
    assert len(T.chars) == len(G.classes)
    for i, a in enumerate(T.chars):
        for j, b in enumerate(T.chars):
            assert inner_product(a, b) == Cyclo.rational(int(i == j))
    reg = ClassFunction.regular(G)
    assert decompose(reg, T) == [int(c.values[0].to_fraction()) for c in T.chars]


def test_sym4_character_values():
    assert [sn_character((3, 1), mu) for mu in [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]] == [3, 1, -1, 0, -1]
    assert len(list(partitions(5))) == 7
    assert cycle_type([1, 0, 3, 2]) == (2, 2)


def test_frobenius_reciprocity():
    rot = AffineMap.from_parts([[0, -1], [1, 0]])
    G = close_group([rot, AffineMap.from_parts([[1, 0], [0, -1]])])
    T = char_table_dihedral(G)
    assert T is not None
    sub = G.subgroup_generated([G.index(rot)])
    for k in range(4):
        # a character of the cyclic subgroup of rotations: rot^j -> i^{jk}
        def psi(x, k=k):
            for j in range(4):
                if G.elements[x] == _power(rot, j):
                    return Cyclo.root(4, j * k)
            raise AssertionError
        ind = induce(G, sub, psi)
        for chi in T.chars:
            rhs = sum((psi(x) * chi.at(x).conj() for x in sub), Cyclo.rational(0)) / len(sub)
            assert inner_product(ind, chi) == rhs


def _power(g, j):
    out = AffineMap.identity(g.dim)
    for _ in range(j):
        out = out @ g
    return out


def test_permutation_character_and_effectiveness():
    G = close_group([AffineMap.from_parts([[0, 1], [1, 0]])])
    T = char_table_abelian(G)
    chi = perm_character(G, [(0, 0), (1, 0), (0, 1), (1, 1)])
    assert [v.to_fraction() for v in chi.values] == [4, 2]
    assert is_effective(chi, T)
    assert recompose(decompose(chi, T), T) == chi
    assert format_class_function(chi, T) == "2 + chi_reg"
    assert not is_effective(ClassFunction(G, [0, 2]), T)
    with pytest.raises(NotVirtualCharacter):
        decompose(ClassFunction(G, [1, 0]), T)
