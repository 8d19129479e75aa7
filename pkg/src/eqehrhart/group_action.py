"""Finite groups acting on a lattice by affine transformations."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import exactlin as el
from .ratfunc import Poly


class OrderExceeded(RuntimeError):
    pass


class NotInvertible(ValueError):
    pass


class NotFiniteOrder(ValueError):
    pass


class AffineMap:
    """x -> A x + b, stored as the extended matrix [[A, b], [0, 1]] acting on M ⊕ Z."""

    __slots__ = ("ext", "_hash")

    def __init__(self, ext):
        self.ext = tuple(tuple(int(x) for x in r) for r in ext)
        n = len(self.ext)
        if self.ext[-1] != tuple([0] * (n - 1) + [1]):
            raise ValueError("extended matrix must preserve the last coordinate")
        self._hash = hash(self.ext)

    @staticmethod
    def from_parts(linear, translation=None) -> "AffineMap":
        d = len(linear)
        b = list(translation) if translation is not None else [0] * d
        if any(Fraction(x).denominator != 1 for x in b):
            raise ValueError("translation must be integral")
        rows = [list(linear[i]) + [b[i]] for i in range(d)]
        rows.append([0] * d + [1])
        return AffineMap(rows)

    @staticmethod
    def identity(d: int) -> "AffineMap":
        return AffineMap(el.identity(d + 1))

    @property
    def dim(self) -> int:
        return len(self.ext) - 1

    @property
    def linear(self) -> list:
        return [list(r[:-1]) for r in self.ext[:-1]]

    @property
    def translation(self) -> list:
        return [r[-1] for r in self.ext[:-1]]

    def __eq__(self, o):
        return isinstance(o, AffineMap) and self.ext == o.ext

    def __hash__(self):
        return self._hash

    def __matmul__(self, o: "AffineMap") -> "AffineMap":
        """Composition: (self @ o)(x) = self(o(x))."""
        return AffineMap(el.matmul([list(r) for r in self.ext], [list(r) for r in o.ext]))

    def inverse(self) -> "AffineMap":
        d = el.det(self.linear) if self.dim else 1
        if abs(d) != 1:
            raise NotInvertible(f"det of linear part is {d}")
        inv = el.inverse([list(r) for r in self.ext])
        return AffineMap([[int(x) for x in r] for r in inv])

    def __call__(self, x) -> tuple:
        x = el.rat_vector(x)
        return tuple(sum(a * y for a, y in zip(r[:-1], x)) + r[-1] for r in self.ext[:-1])

    def apply_ext(self, v) -> tuple:
        """Linear action on M̃ = M ⊕ Z."""
        return tuple(sum(a * y for a, y in zip(r, v)) for r in self.ext)

    def order(self, cap: int = 10000) -> int:
        e = AffineMap.identity(self.dim)
        p = self
        for k in range(1, cap + 1):
            if p == e:
                return k
            p = p @ self
        raise NotFiniteOrder("order exceeds cap")

    def __repr__(self):
        return f"AffineMap(linear={self.linear}, translation={self.translation})"


@dataclass
class FiniteGroup:
    elements: list
    mult: list
    inv: list
    classes: list
    class_of: list
    orders: list
    exponent: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def __len__(self):
        return len(self.elements)

    def index(self, g: AffineMap) -> int:
        return self._index[g]

    @property
    def reps(self) -> list:
        return [c[0] for c in self.classes]

    @property
    def class_sizes(self) -> list:
        return [len(c) for c in self.classes]

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.mult[i][j] == self.mult[j][i] for i in range(n) for j in range(i))

    def conjugate(self, x: int, g: int) -> int:
        """x^{-1} g x."""
        return self.mult[self.mult[self.inv[x]][g]][x]

    def power(self, g: int, k: int) -> int:
        out = 0
        for _ in range(k % self.orders[g]):
            out = self.mult[out][g]
        return out

    def transport(self, maps: Sequence[AffineMap]) -> "FiniteGroup":
        """Same abstract group acting through ``maps`` (one per element, in element order).

        The maps must respect the multiplication table; they need not be distinct.
        """
        maps = list(maps)
        if len(maps) != self.order:
            raise ValueError("one map per element expected")
        for i in range(self.order):
            for j in range(self.order):
                if maps[i] @ maps[j] != maps[self.mult[i][j]]:
                    raise ValueError("maps do not define a homomorphism")
        grp = FiniteGroup(maps, self.mult, self.inv, self.classes, self.class_of, self.orders, self.exponent)
        grp._index = {}
        for i, g in enumerate(maps):
            grp._index.setdefault(g, i)
        return grp

    def subgroup_generated(self, gens: Sequence[int]) -> list:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mult[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)


def close_group(generators: Sequence[AffineMap], max_order: int = 4096, dim: Optional[int] = None) -> FiniteGroup:
    """Breadth-first closure of the generators; index 0 is the identity."""
    if generators:
        dim = generators[0].dim
    elif dim is None:
        dim = 0
    for g in generators:
        g.inverse()
    e = AffineMap.identity(dim)
    elements = [e]
    index = {e: 0}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = x @ g
            if y not in index:
                if len(elements) >= max_order:
                    raise OrderExceeded(f"closure exceeds {max_order} elements")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    n = len(elements)
    mult = [[index[a @ b] for b in elements] for a in elements]
    inv = [row.index(0) for row in mult]
    orders = []
    for i in range(n):
        k, p = 1, i
        while p != 0:
            p = mult[p][i]
            k += 1
        orders.append(k)
    class_of = [-1] * n
    classes = []
    for i in range(n):
        if class_of[i] >= 0:
            continue
        cls = sorted({mult[mult[inv[x]][i]][x] for x in range(n)})
        for j in cls:
            class_of[j] = len(classes)
        # representative first
        cls.remove(i)
        classes.append([i] + cls)
    exponent = 1
    for o in orders:
        exponent = math.lcm(exponent, o)
    grp = FiniteGroup(elements, mult, inv, classes, class_of, orders, exponent)
    grp._index = index
    return grp


# ---------------------------------------------------------------- invariants

def charpoly(m) -> Poly:
    """det(x I - m) via Faddeev-LeVerrier."""
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    c = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        mk = el.matmul(a, mk)
        for i in range(n):
            mk[i][i] += c
        am = el.matmul(a, mk)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    # coeffs[k] multiplies x^{n-k}
    return Poly(reversed(coeffs))


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Poly:
    p = Poly.monomial(m) - 1
    for d in range(1, m):
        if m % d == 0:
            p, r = p.divmod(cyclotomic(d))
            assert r.is_zero()
    return p


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def char_poly_tilde(g: AffineMap) -> Counter:
    """Characteristic polynomial of g on M̃ as {m: multiplicity of Φ_m}."""
    p = charpoly(g.ext)
    out = Counter()
    n = p.degree
    m = 1
    while p.degree > 0:
        if euler_phi(m) <= p.degree:
            phi = cyclotomic(m)
            while True:
                q, r = p.divmod(phi)
                if not r.is_zero():
                    break
                out[m] += 1
                p = q
        m += 1
        if m > 4 * n * n + 4:
            raise NotFiniteOrder("characteristic polynomial is not a product of cyclotomics")
    return out


def det_poly(g: AffineMap) -> Poly:
    """det(I - g̃ t) as an integer polynomial."""
    return charpoly(g.ext).reversed(len(g.ext))


@dataclass(frozen=True)
class FixedSpace:
    point: Optional[tuple]
    directions: tuple
    lattice_point: Optional[tuple]

    @property
    def dim(self) -> int:
        return -1 if self.point is None else len(self.directions)

    @property
    def unique(self) -> bool:
        return self.point is not None and not self.directions

    @property
    def denominator(self) -> int:
        return el.lcm_denominators(self.point) if self.point is not None else 0


def fixed_point(g: AffineMap) -> FixedSpace:
    """Affine fixed space {x : g x = x}."""
    d = g.dim
    a = g.linear
    amI = [[a[i][j] - (i == j) for j in range(d)] for i in range(d)]
    rhs = [-x for x in g.translation]
    pt = el.solve_rational(amI, rhs)
    dirs = tuple(tuple(v) for v in el.nullspace(amI, d))
    lp = el.solve_integer(amI, rhs) if pt is not None else None
    return FixedSpace(pt, dirs, lp)


def orbit(group: FiniteGroup, pt) -> list:
    pt = el.rat_vector(pt)
    return sorted({g(pt) for g in group.elements})


def orbit_of_set(group: FiniteGroup, pts) -> list:
    pts = [el.rat_vector(p) for p in pts]
    return sorted({frozenset(g(p) for p in pts) for g in group.elements}, key=lambda s: sorted(s))


def direct_product(g1: FiniteGroup, g2: FiniteGroup, embed) -> FiniteGroup:
    """G1 × G2 acting through ``embed(a, b)`` for element indices a, b.

    Element (a, b) gets index a * |G2| + b; classes are products of classes, so
    class (i, j) has index i * (#classes of G2) + j.
    """
    n1, n2 = g1.order, g2.order
    elements = [embed(a, b) for a in range(n1) for b in range(n2)]
    mult = [[g1.mult[a][c] * n2 + g2.mult[b][d] for c in range(n1) for d in range(n2)]
            for a in range(n1) for b in range(n2)]
    inv = [g1.inv[a] * n2 + g2.inv[b] for a in range(n1) for b in range(n2)]
    classes = [[a * n2 + b for a in c1 for b in c2] for c1 in g1.classes for c2 in g2.classes]
    class_of = [0] * (n1 * n2)
    for k, c in enumerate(classes):
        for x in c:
            class_of[x] = k
    orders = [math.lcm(g1.orders[a], g2.orders[b]) for a in range(n1) for b in range(n2)]
    grp = FiniteGroup(elements, mult, inv, classes, class_of, orders, math.lcm(g1.exponent, g2.exponent))
    grp._index = {}
    for i, g in enumerate(elements):
        grp._index.setdefault(g, i)
    return grp
