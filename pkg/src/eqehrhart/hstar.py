"""Equivariant h*- and h*_N-series, classification, reciprocity and structural operations."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlin as el
from .ehrhart_engine import (EquivariantSeries, check_invariant, equivariant_L, polytope_ehr_series,
                             polytope_interior_series)
from .group_action import AffineMap, FiniteGroup, charpoly, cyclotomic, det_poly, direct_product, fixed_point
from .polytope import RationalPolytope, codegree, fixed_polytope, lattice_points
from .ratfunc import Poly, RatFunc, pgcd
from .repr_ring import (CharacterTable, ClassFunction, NotVirtualCharacter, decompose, format_class_function,
                        perm_character)

log = logging.getLogger(__name__)

DEFAULT_TRUNCATION = None  # 2(d+1) unless configured


class NotLatticePolytope(ValueError):
    pass


class CheckFailed(AssertionError):
    pass


class HypothesisFailed(ValueError):
    pass


# ---------------------------------------------------------------- M̃ restricted to aff(P)

def tilde_basis(P: RationalPolytope) -> list:
    """Basis of Z^{n+1} ∩ span(P × {1})."""
    hom = [list(el.primitive(tuple(v) + (Fraction(1),))) for v in P.vertices]
    return el.saturate(hom, P.n + 1)


def restricted_matrix(g: AffineMap, basis: Sequence) -> list:
    """Matrix of g̃ on the sublattice spanned by ``basis`` (columns = images in basis coordinates)."""
    bt = el.transpose([list(b) for b in basis])
    cols = []
    for b in basis:
        c = el.solve_rational(bt, list(g.apply_ext(b)))
        if c is None or not el.is_integral(c):
            raise ValueError("sublattice is not preserved")
        cols.append([int(x) for x in c])
    return el.transpose(cols)


def det_poly_on(P: RationalPolytope, g: AffineMap, basis: Optional[list] = None) -> Poly:
    """det(I - g̃ t) on M̃_P = (aff(P) ∩ M) ⊕ Z."""
    if P.dim == P.n:
        return det_poly(g)
    basis = basis if basis is not None else tilde_basis(P)
    m = restricted_matrix(g, basis)
    return charpoly(m).reversed(len(m))


def det_class_function(group: FiniteGroup, P: Optional[RationalPolytope] = None) -> list:
    """det(I - M̃ t) per class, as integer polynomials."""
    basis = tilde_basis(P) if P is not None and P.dim < P.n else None
    out = []
    for r in group.reps:
        g = group.elements[r]
        out.append(det_poly(g) if basis is None else det_poly_on(P, g, basis))
    return out


def det_identity_check(g: AffineMap) -> bool:
    """t^{d+1} det(I - g̃ t^{-1}) = (-1)^{d+1} det(g̃) det(I - g̃ t), and det(I - g̃ t) = (1 - t) det(I - A t)."""
    p = det_poly(g)
    n = len(g.ext)
    sign = (-1) ** n * int(el.det([list(r) for r in g.ext]))
    lin = charpoly(g.linear).reversed(n - 1)
    return p.reversed(n) == p * sign and p == lin * Poly([1, -1])


# ---------------------------------------------------------------- series types

class HStarSeries:
    """Per-class rational functions in s = t^{1/N}."""

    def __init__(self, group: FiniteGroup, funcs: Sequence[RatFunc], N: int = 1, dim: Optional[int] = None,
                 truncate: Optional[int] = None):
        self.group = group
        self.funcs = [f.reduced() for f in funcs]
        self.N = N
        self.dim = dim
        self.truncate = truncate

    def __getitem__(self, cls: int) -> RatFunc:
        return self.funcs[cls]

    def at_element(self, g: int) -> RatFunc:
        return self.funcs[self.group.class_of[g]]

    @property
    def polynomial_classes(self) -> list:
        return [f.is_polynomial() for f in self.funcs]

    @property
    def is_polynomial(self) -> bool:
        return all(self.polynomial_classes)

    @property
    def truncation(self) -> int:
        if self.truncate is not None:
            return self.truncate
        d = self.dim if self.dim is not None else 0
        return 2 * (d + 1) * self.N

    def num_terms(self) -> int:
        """Number of s-exponents to report: full length when polynomial, else the truncation bound."""
        if self.is_polynomial:
            return max(f.as_poly().degree for f in self.funcs) + 1
        return self.truncation

    def coefficient(self, k: int) -> ClassFunction:
        """Coefficient of s^k = t^{k/N}."""
        return ClassFunction(self.group, [f.series(k + 1)[k] for f in self.funcs])

    def coefficients(self, n: Optional[int] = None) -> list:
        n = self.num_terms() if n is None else n
        ser = [f.series(n) for f in self.funcs]
        return [ClassFunction(self.group, [s[k] for s in ser]) for k in range(n)]

    def degree(self) -> Optional[Fraction]:
        """Degree in t (a multiple of 1/N) when polynomial."""
        if not self.is_polynomial:
            return None
        return Fraction(max(f.as_poly().degree for f in self.funcs), self.N)

    def __eq__(self, other):
        return (isinstance(other, HStarSeries) and self.N == other.N
                and all(a == b for a, b in zip(self.funcs, other.funcs)))

    def __repr__(self):
        return f"HStarSeries(N={self.N}, {[str(f) for f in self.funcs]})"

    def format(self, table: Optional[CharacterTable] = None, var: str = "t") -> str:
        if not self.is_polynomial:
            raise ValueError("series is not a polynomial")
        return format_series(self.coefficients(), self.N, table, var)

    def to_json(self, table: Optional[CharacterTable] = None) -> dict:
        out = {
            "N": self.N,
            "dim": self.dim,
            "polynomial": self.is_polynomial,
            "classes": [{"rep_order": self.group.orders[r], "size": len(c),
                         "numerator": [str(x) for x in f.num.c], "denominator": [str(x) for x in f.den.c],
                         "polynomial": f.is_polynomial()}
                        for r, c, f in zip(self.group.reps, self.group.classes, self.funcs)],
        }
        coeffs = self.coefficients()
        out["coefficients"] = [c.to_json() for c in coeffs]
        if table is not None:
            mults = []
            for c in coeffs:
                try:
                    mults.append(decompose(c, table))
                except NotVirtualCharacter:
                    mults.append(None)
            out["irreducibles"] = list(table.names)
            out["multiplicities"] = mults
            if self.is_polynomial:
                out["pretty"] = self.format(table)
        return out

    @staticmethod
    def from_json(data: dict, group: FiniteGroup) -> "HStarSeries":
        funcs = [RatFunc(Poly(Fraction(x) for x in c["numerator"]), Poly(Fraction(x) for x in c["denominator"]))
                 for c in data["classes"]]
        return HStarSeries(group, funcs, data["N"], data.get("dim"))


def format_series(coeffs: Sequence[ClassFunction], N: int = 1, table: Optional[CharacterTable] = None,
                  var: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        s = format_class_function(c, table)
        e = Fraction(k, N)
        mono = "" if e == 0 else (var if e == 1 else (f"{var}^{e}" if e.denominator == 1 else f"{var}^({e})"))
        if not mono:
            parts.append(s)
        elif s == "1":
            parts.append(mono)
        elif s == "-1":
            parts.append("-" + mono)
        else:
            if " " in s or s.startswith("["):
                s = f"({s})"
            parts.append(f"{s}*{mono}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------- computation

def hstar_N(P: RationalPolytope, group: FiniteGroup, N: int = 1, truncate: Optional[int] = None) -> HStarSeries:
    """h*_N per class: Ehr(P^g; s) det(I - g̃ s^N) with s = t^{1/N}."""
    if N < 1:
        raise ValueError("N must be positive")
    check_invariant(P, group)
    dets = det_class_function(group, P)
    funcs = []
    for r, dp in zip(group.reps, dets):
        e = polytope_ehr_series(fixed_polytope(P, group.elements[r]))
        funcs.append(e * RatFunc.from_poly(dp.subs_power(N)))
    return HStarSeries(group, funcs, N, P.dim, truncate)


def hstar(P: RationalPolytope, group: FiniteGroup, truncate: Optional[int] = None) -> HStarSeries:
    if not P.is_lattice():
        raise NotLatticePolytope("h* is only defined here for lattice polytopes; use hstar_N")
    return hstar_N(P, group, 1, truncate)


def equivariant_interior(P: RationalPolytope, group: FiniteGroup) -> EquivariantSeries:
    """Σ_{m>0} L(P°, ρ; m) t^m per class."""
    check_invariant(P, group)
    return EquivariantSeries(group, [polytope_interior_series(fixed_polytope(P, group.elements[r]))
                                     for r in group.reps])


def _multiplicities(c: ClassFunction, table: CharacterTable):
    try:
        return decompose(c, table)
    except NotVirtualCharacter:
        return None


def classify(h: HStarSeries, table: Optional[CharacterTable] = None) -> dict:
    """Polynomiality per class and globally; effectiveness of all (or the first truncated) coefficients."""
    poly = h.polynomial_classes
    out = {"polynomial": all(poly), "polynomial_classes": poly, "N": h.N}
    coeffs = h.coefficients()
    out["terms"] = len(coeffs)
    if all(poly):
        out["degree"] = h.degree()
        top = max(k for k, c in enumerate(coeffs) if not c.is_zero()) if any(not c.is_zero() for c in coeffs) else 0
        out["leading"] = coeffs[top]
    else:
        out["degree"] = None
        out["leading"] = None
        out["non_polynomial_classes"] = [i for i, p in enumerate(poly) if not p]
    if table is None:
        out["effective"] = None
        return out
    mults = [_multiplicities(c, table) for c in coeffs]
    out["multiplicities"] = mults
    eff = all(m is not None and all(x >= 0 for x in m) for m in mults)
    out["effective"] = eff
    out["effective_scope"] = "all" if all(poly) else f"first {len(coeffs)} coefficients"
    if eff != all(poly):
        log.warning("polynomial=%s but effective=%s (within %s)", all(poly), eff, out["effective_scope"])
    return out


def reciprocity_check(P: RationalPolytope, group: FiniteGroup, h: Optional[HStarSeries] = None) -> dict:
    """deg h* = deg P and the leading coefficient is the interior permutation character at codeg P."""
    h = h if h is not None else hstar(P, group)
    if not h.is_polynomial:
        raise CheckFailed("h* is not a polynomial")
    cd = codegree(P)
    expected_deg = P.dim + 1 - cd
    deg = h.degree()
    lead = h.coefficient(int(deg)) if deg is not None else None
    interior = equivariant_L(P, group, cd, interior=True)
    report = {"codegree": cd, "degree": deg, "expected_degree": expected_deg, "leading": lead, "interior": interior}
    if deg != expected_deg:
        raise CheckFailed(f"degree {deg} differs from dim + 1 - codeg = {expected_deg}")
    if lead != interior:
        diff = [(i, a, b) for i, (a, b) in enumerate(zip(lead.values, interior.values)) if a != b]
        raise CheckFailed(f"leading coefficient differs from interior character at classes {diff}")
    return report


def n_reciprocity_holds(P: RationalPolytope, group: FiniteGroup, N: int, h: Optional[HStarSeries] = None) -> list:
    """Per class: Σ_{m>0} L(P°,ρ;m)(g) s^m · det(I - g̃ s^N) = s^{N(d+1)} h*_N(1/s)."""
    h = h if h is not None else hstar_N(P, group, N)
    inter = equivariant_interior(P, group)
    dets = det_class_function(group, P)
    out = []
    k = N * (P.dim + 1)
    for f, i, dp in zip(h.funcs, inter.funcs, dets):
        a, b = f.num, f.den
        lhs = i * RatFunc.from_poly(dp.subs_power(N) * b.reversed() * Poly.monomial(a.degree))
        rhs = RatFunc.from_poly(Poly.monomial(k + b.degree) * a.reversed())
        out.append(lhs == rhs)
    return out


def low_coefficient_identity(P: RationalPolytope, group: FiniteGroup, N: int, h: Optional[HStarSeries] = None) -> bool:
    """h*_N at m/N equals L(P,ρ;m) for 0 ≤ m < N, and at 1 equals L(P,ρ;N) - [M̃]."""
    h = h if h is not None else hstar_N(P, group, N)
    coeffs = h.coefficients(N + 1)
    for m in range(N):
        L = perm_character(group, lattice_points(P, m, False)) if m > 0 else ClassFunction.trivial(group)
        if coeffs[m] != L:
            return False
    dets = det_class_function(group, P)
    mtilde = ClassFunction(group, [-d[1] for d in dets])
    return coeffs[N] == equivariant_L(P, group, N) - mtilde


# ---------------------------------------------------------------- Ψ operators

def _power_denominator(f: RatFunc) -> tuple[Poly, Counter]:
    """Rewrite f = A / ∏(1 - s^k)^{m_k}."""
    r = f.reduced()
    rem = r.den
    exps = Counter()
    D = Poly([1])
    k = 1
    while rem.degree > 0:
        if k > 4 * (r.den.degree + 1) ** 2 + 4:
            raise ValueError("denominator is not a product of cyclotomic polynomials")
        g = pgcd(rem, Poly.one_minus_tk(k))
        if g.degree > 0:
            rem, _ = rem.divmod(g)
            exps[k] += 1
            D = D * Poly.one_minus_tk(k)
        else:
            k += 1
    q, rr = D.divmod(r.den)
    assert rr.is_zero()
    return r.num * q * Fraction(1, 1) * (1 / rem[0]), exps


def _psi_int_func(f: RatFunc, N: int) -> RatFunc:
    num, exps = _power_denominator(f)
    for k, m in exps.items():
        lift, _ = Poly.one_minus_tk(k * N).divmod(Poly.one_minus_tk(k))
        num = num * lift ** m
    kept = Poly([num[i * N] for i in range(num.degree // N + 1)]) if not num.is_zero() else num
    return RatFunc.structured(kept, exps.elements()).reduced()


def psi_int(h: HStarSeries) -> HStarSeries:
    """Keep exponents in Z: Ψ_Int(h*_N(P,ρ)) = h*(P, ρ_N)."""
    return HStarSeries(h.group, [_psi_int_func(f, h.N) for f in h.funcs], 1, h.dim)


def psi_ceil(h: HStarSeries) -> HStarSeries:
    """Round exponents up: Ψ_Ceil(f) = Ψ_Int((1 + s + ... + s^{N-1}) f)."""
    bump = RatFunc.from_poly(Poly([1] * h.N))
    return HStarSeries(h.group, [_psi_int_func(f * bump, h.N) for f in h.funcs], 1, h.dim)


# ---------------------------------------------------------------- constructions

def scale_action(P: RationalPolytope, group: FiniteGroup, N: int) -> tuple[RationalPolytope, FiniteGroup]:
    """(NP, ρ_N) with ρ_N(g)(x) = A_g x + N b_g."""
    NP = RationalPolytope([el.vscale(N, v) for v in P.vertices])
    maps = [AffineMap.from_parts(g.linear, [N * b for b in g.translation]) for g in group.elements]
    return NP, group.transport(maps)


def join_map(g1: AffineMap, g2: AffineMap) -> AffineMap:
    """Action of (g1, g2) on the free join in coordinates (x1, x2, h)."""
    d1, d2 = g1.dim, g2.dim
    n = d1 + d2 + 1
    lin = el.zeros(n, n)
    a1, a2 = g1.linear, g2.linear
    for i in range(d1):
        for j in range(d1):
            lin[i][j] = a1[i][j]
        lin[i][n - 1] = g1.translation[i]
    for i in range(d2):
        for j in range(d2):
            lin[d1 + i][d1 + j] = a2[i][j]
        lin[d1 + i][n - 1] = -g2.translation[i]
    lin[n - 1][n - 1] = 1
    tr = [0] * d1 + list(g2.translation) + [0]
    return AffineMap.from_parts(lin, tr)


def split_join_map(g: AffineMap, d1: int, d2: int) -> tuple[AffineMap, AffineMap]:
    lin, n = g.linear, d1 + d2 + 1
    a1 = [row[:d1] for row in lin[:d1]]
    b1 = [lin[i][n - 1] for i in range(d1)]
    a2 = [row[d1:d1 + d2] for row in lin[d1:d1 + d2]]
    b2 = list(g.translation[d1:d1 + d2])
    return AffineMap.from_parts(a1, b1), AffineMap.from_parts(a2, b2)


def free_join(P1: RationalPolytope, G1: FiniteGroup, P2: RationalPolytope, G2: FiniteGroup
              ) -> tuple[RationalPolytope, FiniteGroup]:
    """P1 * P2 = Conv(P1 × {0} × {1}, {0} × P2 × {0}) with the product action of G1 × G2."""
    d1, d2 = P1.n, P2.n
    pts = [tuple(v) + (0,) * d2 + (1,) for v in P1.vertices] + [(0,) * d1 + tuple(v) + (0,) for v in P2.vertices]
    J = RationalPolytope(pts)
    G = direct_product(G1, G2, lambda a, b: join_map(G1.elements[a], G2.elements[b]))
    return J, G


def _point_group(group: FiniteGroup) -> tuple[RationalPolytope, FiniteGroup]:
    pt = RationalPolytope([()])
    return pt, group.transport([AffineMap.identity(0)] * group.order)


def pyramid(P: RationalPolytope, group: FiniteGroup) -> tuple[RationalPolytope, FiniteGroup]:
    """Pyr(P) = Conv(P × {1}, apex 0) ⊂ M ⊕ Z, the apex fixed by every element."""
    d = P.n
    pts = [tuple(v) + (1,) for v in P.vertices] + [(0,) * (d + 1)]
    maps = [join_map(g, AffineMap.identity(0)) for g in group.elements]
    return RationalPolytope(pts), group.transport(maps)


def prime_fixed_closed_form(P: RationalPolytope, group: FiniteGroup) -> HStarSeries:
    """h* for Z/p acting with a unique fixed point c ∈ (1/p)M.

    Non-identity classes give (1 + t + ... + t^{p-1})^{(d+1-deg c)/(p-1)}, with deg c = 1 if c ∈ M, else p.
    """
    p = group.order
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise HypothesisFailed("group order is not prime")
    if not P.is_lattice() or P.dim != P.n:
        raise HypothesisFailed("need a full-dimensional lattice polytope")
    d = P.dim
    g = group.elements[group.reps[1]]
    fs = fixed_point(g)
    if not fs.unique:
        raise HypothesisFailed("fixed point is not unique")
    degc = 1 if fs.denominator == 1 else p
    if (d + 1 - degc) % (p - 1):
        raise HypothesisFailed("exponent is not integral")
    e = (d + 1 - degc) // (p - 1)
    phi = Poly([1] * p)
    other = RatFunc.from_poly(phi ** e) if e >= 0 else RatFunc(Poly([1]), phi ** (-e))
    classical = polytope_ehr_series(P) * RatFunc.from_poly(Poly.one_minus_tk(1) ** (d + 1))
    return HStarSeries(group, [classical] + [other] * (len(group.classes) - 1), 1, d)


def monotonicity_check(P: RationalPolytope, Q: RationalPolytope, group: FiniteGroup, table: CharacterTable,
                       triangulation=None) -> dict:
    """h*(Q, ρ_Q) ≤ h*(P, ρ) coefficientwise in irreducible multiplicities.

    When a triangulation of P is supplied, Q must be a union of its faces.
    """
    if any(not P.contains(v) for v in Q.vertices):
        raise ValueError("Q is not contained in P")
    if triangulation is not None and not triangulation.restricts_to(Q):
        raise ValueError("triangulation does not restrict to Q")
    hp, hq = hstar(P, group), hstar(Q, group)
    if not (hp.is_polynomial and hq.is_polynomial):
        return {"holds": False, "reason": "non-polynomial h*"}
    n = max(len(hp.coefficients()), len(hq.coefficients()))
    diffs = [a - b for a, b in zip(hp.coefficients(n), hq.coefficients(n))]
    mults = [_multiplicities(c, table) for c in diffs]
    holds = all(m is not None and min(m) >= 0 for m in mults)
    return {"holds": holds, "differences": diffs, "multiplicities": mults, "hP": hp, "hQ": hq}
