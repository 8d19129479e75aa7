import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eqehrhart import exactlin as el

small = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def any_matrix(draw):
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    return draw(matrices(r, c))


@st.composite
def square(draw):
    n = draw(st.integers(1, 4))
    return draw(matrices(n, n))


@given(any_matrix())
def test_hnf_is_unimodular_transform(m):
    h, u = el.hnf(m)
    assert el.matmul(u, m) == h
    assert abs(el.det(u)) == 1
    # pivots positive, entries above reduced
    for i, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(r) for r in h[i:])
            break
        p = nz[0]
        assert row[p] > 0
        for k in range(i):
            assert 0 <= h[k][p] < row[p]


@given(any_matrix())
def test_snf_matches_sympy_invariant_factors(m):
    diag, u, v = el.snf(m)
    d = el.matmul(el.matmul(u, m), v)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j and i < len(diag) else 0)
    nz = [abs(x) for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # determinantal divisors: d_1 ... d_k = gcd of all k x k minors
    M = sympy.Matrix(m)
    prod = 1
    for k in range(1, len(nz) + 1):
        g = 0
        for rows in itertools.combinations(range(M.rows), k):
            for cols in itertools.combinations(range(M.cols), k):
                g = math.gcd(g, int(M.extract(list(rows), list(cols)).det()))
        prod *= nz[k - 1]
        assert g == prod
    assert len(nz) == M.rank()


@given(square())
def test_det_and_inverse_match_sympy(m):
    d = el.det(m)
    assert d == sympy.Matrix(m).det()
    if d != 0:
        inv = el.inverse(m)
        assert el.matmul(inv, [[Fraction(x) for x in r] for r in m]) == el.identity(len(m))


@given(any_matrix())
def test_rank_and_nullspace(m):
    assert el.rank(m) == sympy.Matrix(m).rank()
    for v in el.nullspace(m, len(m[0])):
        assert all(x == 0 for x in el.matvec(m, v))


@given(any_matrix(), st.lists(small, min_size=4, max_size=4))
@settings(max_examples=60)
def test_solve_integer_agrees_with_definition(m, b):
    b = b[: len(m)]
    x = el.solve_integer(m, b)
    if x is not None:
        assert el.is_integral(x)
        assert list(el.matvec(m, x)) == b
    else:
        # no integer solution: either no rational solution or the lattice misses b
        xr = el.solve_rational(m, b)
        if xr is not None and len(m[0]) == len(m) and el.det(m) in (1, -1):
            raise AssertionError("unimodular system must have an integer solution")


def test_saturate_recovers_lattice():
    # 2*e1 spans a sublattice of index 2; saturation is e1
    assert el.saturate([[2, 0]], 2) in ([[1, 0]], [[-1, 0]])
    assert el.lattice_index(el.LatticeBasis.from_rows([[2, 0], [0, 3]]), el.LatticeBasis.standard(2)) == 6


def test_affine_lattice_membership():
    lat = el.LatticeBasis.from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 2]], offset=(1, 1, 1))
    assert lat.contains((1, -1, 1))
    assert not lat.contains((0, 0, 0))


@given(st.integers(1, 4), st.integers(2, 6), st.data())
@settings(max_examples=80, deadline=None)
def test_lp_maximize_matches_scipy(m, n, data):
    import numpy as np
    from scipy.optimize import linprog
    A = [data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)) for _ in range(m)]
    b = data.draw(st.lists(st.integers(-3, 3), min_size=m, max_size=m))
    c = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    res = linprog(-np.array(c), A_eq=np.array(A), b_eq=np.array(b), bounds=[(0, None)] * n, method="highs")
    if res.status == 3:
        with pytest.raises(ValueError):
            el.lp_maximize(c, A, b)
        return
    ours = el.lp_maximize(c, A, b)
    if res.status == 2:
        assert ours is None
    else:
        assert ours is not None and abs(float(ours) + res.fun) < 1e-7
