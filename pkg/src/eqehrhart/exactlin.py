"""Exact integer and rational linear algebra.

Matrices are plain lists of rows. Integer matrices hold Python ints, rational
ones hold ``fractions.Fraction``. Nothing here ever touches a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

Matrix = list  # list of rows


class NotASublattice(ValueError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def rat_vector(v) -> tuple:
    return tuple(frac(x) for x in v)


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(m: Matrix) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vecmat(v: Sequence, a: Matrix) -> list:
    if not a:
        return []
    return [sum(v[i] * a[i][j] for i in range(len(a))) for j in range(len(a[0]))]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * x for x in v)


def lcm_denominators(v) -> int:
    out = 1
    for x in v:
        out = math.lcm(out, frac(x).denominator)
    return out


def primitive(v: Sequence) -> tuple:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    d = lcm_denominators(v)
    w = [int(frac(x) * d) for x in v]
    g = 0
    for x in w:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def is_integral(v) -> bool:
    return all(frac(x).denominator == 1 for x in v)


# ---------------------------------------------------------------- HNF / SNF

def hnf(m: Matrix) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U*m == H``, ``U`` unimodular, ``H`` in row echelon
    form with positive pivots and the entries above each pivot reduced into
    ``[0, pivot)``. Zero rows sit at the bottom.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = [list(map(int, r)) for r in m]
    u = identity(rows)
    piv_row = 0
    pivots = []
    for c in range(cols):
        if piv_row >= rows:
            break
        # gcd-eliminate column c below piv_row
        for r in range(piv_row + 1, rows):
            if h[r][c] == 0:
                continue
            a, b = h[piv_row][c], h[r][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [x y; -q p] has det x*p + y*q = 1
            hp, hr = h[piv_row], h[r]
            h[piv_row] = [x * s + y * t for s, t in zip(hp, hr)]
            h[r] = [-q * s + p * t for s, t in zip(hp, hr)]
            up, ur = u[piv_row], u[r]
            u[piv_row] = [x * s + y * t for s, t in zip(up, ur)]
            u[r] = [-q * s + p * t for s, t in zip(up, ur)]
        if h[piv_row][c] == 0:
            continue
        if h[piv_row][c] < 0:
            h[piv_row] = [-s for s in h[piv_row]]
            u[piv_row] = [-s for s in u[piv_row]]
        pv = h[piv_row][c]
        for r in range(piv_row):
            k = h[r][c] // pv
            if k:
                h[r] = [s - k * t for s, t in zip(h[r], h[piv_row])]
                u[r] = [s - k * t for s, t in zip(u[r], u[piv_row])]
        pivots.append(c)
        piv_row += 1
    return h, u


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def snf(m: Matrix) -> tuple[list, Matrix, Matrix]:
    """Smith normal form: ``(diag, U, V)`` with ``U*m*V`` diagonal, d_i | d_{i+1}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    u = identity(rows)
    v = identity(cols)
    t = 0
    while t < min(rows, cols):
        # choose smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        u[t], u[i] = u[i], u[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        for r in v:
            r[t], r[j] = r[j], r[t]
        done = False
        while not done:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                k = a[i][t] // p
                if k:
                    a[i] = [x - k * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - k * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                k = a[t][j] // p
                if k:
                    for r in a:
                        r[j] -= k * r[t]
                    for r in v:
                        r[j] -= k * r[t]
                if a[t][j]:
                    done = False
            if not done:
                # move a smaller remainder into pivot position
                best = None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(best[1])):
                        best = (('r', i), a[i][t])
                for j in range(t, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < abs(best[1])):
                        best = (('c', j), a[t][j])
                kind, idx = best[0]
                if kind == 'r':
                    a[t], a[idx] = a[idx], a[t]
                    u[t], u[idx] = u[idx], u[t]
                else:
                    for r in a:
                        r[t], r[idx] = r[idx], r[t]
                    for r in v:
                        r[t], r[idx] = r[idx], r[t]
                continue
            # divisibility condition on the rest of the block
            p = a[t][t]
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                u[t] = [x + y for x, y in zip(u[t], u[bad])]
                done = False
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, u, v


# ---------------------------------------------------------------- rational

def rref(m: Matrix) -> tuple[Matrix, list]:
    """Reduced row echelon form over Q; returns (R, pivot columns)."""
    a = [[frac(x) for x in r] for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                k = a[i][c]
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def det(m: Matrix):
    n = len(m)
    a = [[frac(x) for x in r] for r in m]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        pv = a[c][c]
        out *= pv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                k = a[i][c] / pv
                a[i] = [x - k * y for x, y in zip(a[i], a[c])]
    if out.denominator == 1:
        return int(out)
    return out


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(m)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def solve_rational(a: Matrix, b: Sequence) -> Optional[tuple]:
    """A particular rational solution of ``A x = b`` (free variables 0), or None."""
    if not a:
        return None if any(frac(x) != 0 for x in b) else ()
    cols = len(a[0])
    aug = [list(r) + [b[i]] for i, r in enumerate(a)]
    r, piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = r[i][cols]
    return tuple(x)


def nullspace(m: Matrix, ncols: Optional[int] = None) -> Matrix:
    """Rational basis of {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    cols = len(m[0])
    r, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for i, c in enumerate(piv):
            x[c] = -r[i][f]
        basis.append(x)
    return basis


def integer_kernel(m: Matrix, ncols: Optional[int] = None) -> Matrix:
    """Z-basis of {x in Z^n : m x = 0} (a saturated lattice)."""
    if not m:
        return identity(ncols or 0)
    n = len(m[0])
    rows = [list(primitive(r)) if any(r) else [0] * n for r in m]
    h, u = hnf(transpose(rows))
    return [u[i] for i in range(n) if not any(h[i])]


def saturate(rows: Matrix, n: int) -> Matrix:
    """Z-basis (in HNF) of span(rows) ∩ Z^n."""
    rows = [r for r in rows if any(frac(x) != 0 for x in r)]
    if not rows:
        return []
    perp = integer_kernel([list(primitive(r)) for r in rows], n)
    if not perp:
        return identity(n)
    basis = integer_kernel(perp, n)
    h, _ = hnf(basis)
    return [r for r in h if any(r)]


def solve_integer(a: Matrix, b: Sequence) -> Optional[tuple]:
    """An integer solution of ``A x = b`` or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(frac(x).denominator != 1 for x in b):
        d = lcm_denominators(list(b) + [x for r in a for x in r])
    else:
        d = lcm_denominators([x for r in a for x in r])
    ai = [[int(frac(x) * d) for x in r] for r in a]
    bi = [frac(x) * d for x in b]
    if any(x.denominator != 1 for x in bi):
        return None
    bi = [int(x) for x in bi]
    diag, u, v = snf(ai)
    ub = matvec(u, bi)
    y = [0] * cols
    for i in range(rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return tuple(matvec(v, y))


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class LatticeBasis:
    """A (possibly affine) lattice ``offset + Z-span(basis)`` in Q^n."""

    ambient_dim: int
    basis: tuple
    offset: Optional[tuple] = field(default=None)

    @staticmethod
    def from_rows(rows, ambient_dim: Optional[int] = None, offset=None) -> "LatticeBasis":
        rows = [[int(x) for x in r] for r in rows]
        n = ambient_dim if ambient_dim is not None else (len(rows[0]) if rows else 0)
        h, _ = hnf(rows) if rows else ([], [])
        basis = tuple(tuple(r) for r in h if any(r))
        if rank([list(r) for r in basis]) != len(basis):
            raise ValueError("basis rows are dependent")
        off = rat_vector(offset) if offset is not None else None
        return LatticeBasis(n, basis, off)

    @staticmethod
    def standard(n: int) -> "LatticeBasis":
        return LatticeBasis.from_rows(identity(n), n)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v) -> Optional[tuple]:
        """Rational coordinates of a vector in the span, or None."""
        if not self.basis:
            return () if all(frac(x) == 0 for x in v) else None
        return solve_rational(transpose([list(r) for r in self.basis]), list(v))

    def contains(self, v) -> bool:
        if self.offset is not None:
            v = vsub(rat_vector(v), self.offset)
        c = self.coordinates(v)
        return c is not None and is_integral(c)


def lattice_index(sub: LatticeBasis, sup: LatticeBasis):
    """Index [sup : sub]; ``math.inf`` when the ranks differ."""
    coords = []
    for r in sub.basis:
        c = sup.coordinates(r)
        if c is None or not is_integral(c):
            raise NotASublattice(f"{r} is not in the larger lattice")
        coords.append([int(x) for x in c])
    if sub.rank != sup.rank:
        return math.inf
    if not coords:
        return 1
    diag, _, _ = snf(coords)
    out = 1
    for x in diag:
        out *= x
    return abs(out)


# ---------------------------------------------------------------- linear programming

def lp_maximize(c: Sequence, a_eq: Matrix, b_eq: Sequence) -> Optional[Fraction]:
    """max c·x subject to a_eq x = b_eq, x ≥ 0, exactly; None when infeasible.

    Two-phase tableau simplex with Bland's rule. Meant for the small systems arising in
    certificate checks; unbounded problems raise ValueError.
    """
    m, n = len(a_eq), len(c)
    rows = []
    for r, b in zip(a_eq, b_eq):
        r, b = [Fraction(x) for x in r], Fraction(b)
        if b < 0:
            r, b = [-x for x in r], -b
        rows.append(r + [b])
    # tableau rows: n structural + m artificial columns, then the rhs
    tab = [rows[i][:n] + [Fraction(int(i == j)) for j in range(m)] + [rows[i][n]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def run(obj: list, allowed: int) -> None:
        while True:
            # reduced costs of the current basis, maximising obj
            red = [obj[j] - sum(obj[basis[i]] * tab[i][j] for i in range(m)) for j in range(allowed)]
            enter = next((j for j in range(allowed) if red[j] > 0 and j not in basis), None)
            if enter is None:
                return
            best = None
            for i in range(m):
                if tab[i][enter] > 0:
                    ratio = tab[i][-1] / tab[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise ValueError("unbounded linear program")
            i = best[1]
            p = tab[i][enter]
            tab[i] = [x / p for x in tab[i]]
            for k in range(m):
                if k != i and tab[k][enter]:
                    f = tab[k][enter]
                    tab[k] = [x - f * y for x, y in zip(tab[k], tab[i])]
            basis[i] = enter

    run([Fraction(0)] * n + [Fraction(-1)] * m, n + m)
    if any(basis[i] >= n and tab[i][-1] != 0 for i in range(m)):
        return None
    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if tab[i][j] != 0), None)
            if j is not None:
                p = tab[i][j]
                tab[i] = [x / p for x in tab[i]]
                for k in range(m):
                    if k != i and tab[k][j]:
                        f = tab[k][j]
                        tab[k] = [x - f * y for x, y in zip(tab[k], tab[i])]
                basis[i] = j
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(tab)
    obj = [Fraction(x) for x in c]
    run(obj, n)
    return sum(obj[basis[i]] * tab[i][-1] for i in range(m))
