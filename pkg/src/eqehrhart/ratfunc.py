"""Univariate polynomials and rational functions in t over Q.

Denominators remember the structured factors (1 - t^k) they were built from,
so closed forms can be printed the way they are usually written.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Optional


def _trim(c: list) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _trim(Fraction(x) for x in coeffs)

    @staticmethod
    def monomial(k: int, coeff=1) -> "Poly":
        return Poly([0] * k + [coeff])

    @staticmethod
    def one_minus_tk(k: int) -> "Poly":
        return Poly([1] + [0] * (k - 1) + [-1]) if k > 0 else Poly([0])

    @staticmethod
    def from_terms(terms: dict) -> "Poly":
        if not terms:
            return Poly()
        c = [0] * (max(terms) + 1)
        for k, v in terms.items():
            c[k] += v
        return Poly(c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __getitem__(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, o):
        o = _as_poly(o)
        n = max(len(self.c), len(o.c))
        return Poly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, o):
        return self + (-_as_poly(o))

    def __rsub__(self, o):
        return _as_poly(o) - self

    def __mul__(self, o):
        o = _as_poly(o)
        if not self.c or not o.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, o: "Poly") -> tuple["Poly", "Poly"]:
        if o.is_zero():
            raise ZeroDivisionError
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(o.c) + 1, 0)
        lead = o.c[-1]
        for i in range(len(r) - len(o.c), -1, -1):
            k = r[i + len(o.c) - 1] / lead
            q[i] = k
            if k:
                for j, b in enumerate(o.c):
                    r[i + j] -= k * b
        return Poly(q), Poly(r)

    def __call__(self, x):
        out = 0
        for a in reversed(self.c):
            out = out * x + a
        return out

    def subs_power(self, k: int) -> "Poly":
        """p(t^k)."""
        out = [Fraction(0)] * (k * self.degree + 1 if self.c else 0)
        for i, a in enumerate(self.c):
            out[i * k] = a
        return Poly(out)

    def reversed(self, deg: Optional[int] = None) -> "Poly":
        """t^deg p(1/t)."""
        deg = self.degree if deg is None else deg
        out = [Fraction(0)] * (deg + 1)
        for i, a in enumerate(self.c):
            out[deg - i] = a
        return Poly(out)

    def valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        return -1

    def monic(self) -> "Poly":
        return Poly(x / self.c[-1] for x in self.c)

    def terms(self) -> list:
        return [(i, a) for i, a in enumerate(self.c) if a]

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def pgcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def format_poly(p: Poly, var: str = "t", exponent_den: int = 1) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, a in p.terms():
        mono = _mono(k, var, exponent_den)
        if mono == "1":
            s = str(a)
        elif a == 1:
            s = mono
        elif a == -1:
            s = "-" + mono
        else:
            s = f"{a}*{mono}"
        parts.append(s)
    out = parts[0]
    for s in parts[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


def _mono(k: int, var: str, den: int) -> str:
    if k == 0:
        return "1"
    e = Fraction(k, den)
    if e == 1:
        return var
    return f"{var}^{e}" if e.denominator == 1 else f"{var}^({e})"


class RatFunc:
    """num / den with den(0) = 1, remembering (1 - t^k) factors of the denominator."""

    __slots__ = ("num", "den", "factors")

    def __init__(self, num: Poly, den: Optional[Poly] = None, factors: Optional[Counter] = None):
        if den is None:
            if factors:
                den = Poly([1])
                for k, m in factors.items():
                    den = den * Poly.one_minus_tk(k) ** m
            else:
                den = Poly([1])
        if den.is_zero() or den[0] == 0:
            raise ValueError("denominator must have nonzero constant term")
        c0 = den[0]
        if c0 != 1:
            num = Poly(x / c0 for x in num.c)
            den = Poly(x / c0 for x in den.c)
        self.num = num
        self.den = den
        self.factors = Counter(factors) if factors else None

    @staticmethod
    def from_poly(p) -> "RatFunc":
        return RatFunc(_as_poly(p))

    @staticmethod
    def structured(num: Poly, exps: Iterable[int]) -> "RatFunc":
        return RatFunc(num, factors=Counter(exps))

    def __add__(self, o):
        o = _as_rf(o)
        if self.factors is not None and o.factors is not None:
            f = self.factors | o.factors
            return RatFunc(self._num_over(f) + o._num_over(f), factors=f)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def _num_over(self, f: Counter) -> Poly:
        extra = f - self.factors
        out = self.num
        for k, m in extra.items():
            out = out * Poly.one_minus_tk(k) ** m
        return out

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.factors)

    def __sub__(self, o):
        return self + (-_as_rf(o))

    def __rsub__(self, o):
        return _as_rf(o) - self

    def __mul__(self, o):
        o = _as_rf(o)
        f = None
        if self.factors is not None and o.factors is not None:
            f = self.factors + o.factors
        return RatFunc(self.num * o.num, self.den * o.den, f)

    __rmul__ = __mul__

    def __eq__(self, o) -> bool:
        o = _as_rf(o)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    def reduced(self) -> "RatFunc":
        g = pgcd(self.num, self.den)
        if g.is_zero() or g.degree == 0:
            return RatFunc(self.num, self.den)
        # g has nonzero constant term since den(0) != 0
        n, _ = self.num.divmod(g)
        d, _ = self.den.divmod(g)
        return RatFunc(n, d)

    def is_polynomial(self) -> bool:
        return self.reduced().den.degree == 0

    def as_poly(self) -> Poly:
        r = self.reduced()
        if r.den.degree != 0:
            raise ValueError("not a polynomial")
        return r.num

    def series(self, n: int) -> list:
        """First n power-series coefficients."""
        out = []
        d = self.den.c
        for k in range(n):
            s = self.num[k]
            for j in range(1, min(k, len(d) - 1) + 1):
                s -= d[j] * out[k - j]
            out.append(s)
        return out

    def subs_power(self, k: int) -> "RatFunc":
        f = Counter({e * k: m for e, m in self.factors.items()}) if self.factors else None
        return RatFunc(self.num.subs_power(k), self.den.subs_power(k), f)

    def pole_order_at_one(self) -> int:
        r = self.reduced()
        return _mult_at_one(r.den) - _mult_at_one(r.num)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)})"


def _mult_at_one(p: Poly) -> int:
    m = 0
    root = Poly([-1, 1])
    while not p.is_zero() and p(1) == 0:
        p, _ = p.divmod(root)
        m += 1
    return m


def _as_rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    return RatFunc(_as_poly(x), factors=Counter())


def format_ratfunc(f: RatFunc, var: str = "t", exponent_den: int = 1) -> str:
    r = f.reduced()
    if r.den.degree == 0:
        return format_poly(r.num, var, exponent_den)
    return f"({format_poly(r.num, var, exponent_den)}) / ({format_poly(r.den, var, exponent_den)})"
