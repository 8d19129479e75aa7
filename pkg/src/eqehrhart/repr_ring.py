"""Cyclotomic numbers, class functions and character tables."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .group_action import FiniteGroup, cyclotomic, euler_phi
from .ratfunc import Poly


class NotVirtualCharacter(ValueError):
    pass


class TableInvalid(ValueError):
    pass


class NotASubgroup(ValueError):
    pass


# ---------------------------------------------------------------- Cyclo

class Cyclo:
    """An element of Q(ζ_e) in the power basis 1, ζ, ..., ζ^{φ(e)-1}."""

    __slots__ = ("e", "c")

    def __init__(self, e: int, coeffs: Sequence):
        self.e = e
        n = euler_phi(e)
        c = list(coeffs)
        if len(c) > n:
            c = list(_reduce(e, Poly(c)).c)
        c = [Fraction(x) for x in c] + [Fraction(0)] * (n - len(c))
        self.c = tuple(c[:n])

    @staticmethod
    def rational(q) -> "Cyclo":
        return Cyclo(1, [q])

    @staticmethod
    def root(e: int, k: int = 1) -> "Cyclo":
        k %= e
        return Cyclo(e, _reduce(e, Poly.monomial(k)).c)

    def lift(self, big: int) -> "Cyclo":
        if big == self.e:
            return self
        step = big // self.e
        terms = {i * step: a for i, a in enumerate(self.c) if a}
        return Cyclo(big, _reduce(big, Poly.from_terms(terms)).c)

    def _common(self, o: "Cyclo"):
        L = math.lcm(self.e, o.e)
        return self.lift(L), o.lift(L), L

    def __add__(self, o):
        o = as_cyclo(o)
        if self.e == o.e:
            return Cyclo(self.e, [a + b for a, b in zip(self.c, o.c)])
        a, b, L = self._common(o)
        return Cyclo(L, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.e, [-x for x in self.c])

    def __sub__(self, o):
        return self + (-as_cyclo(o))

    def __rsub__(self, o):
        return as_cyclo(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return Cyclo(self.e, [x * o for x in self.c])
        o = as_cyclo(o)
        if o.e == 1:
            return self * o.c[0]
        if self.e == 1:
            return o * self.c[0]
        a, b, L = self._common(o)
        return Cyclo(L, _reduce(L, Poly(a.c) * Poly(b.c)).c)

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = Fraction(q)
        return Cyclo(self.e, [x / q for x in self.c])

    def conj(self) -> "Cyclo":
        if self.e <= 2:
            return self
        terms = {}
        for i, a in enumerate(self.c):
            if a:
                k = (-i) % self.e
                terms[k] = terms.get(k, 0) + a
        return Cyclo(self.e, _reduce(self.e, Poly.from_terms(terms)).c)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.c[0].denominator == 1

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.is_rational() and self.c[0] == o
        if not isinstance(o, Cyclo):
            return NotImplemented
        a, b, _ = self._common(o)
        return a.c == b.c

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash(("cyclo", self.e, self.c))

    def __repr__(self):
        if self.is_rational():
            return str(self.c[0])
        parts = []
        for i, a in enumerate(self.c):
            if a:
                z = "1" if i == 0 else (f"z{self.e}" if i == 1 else f"z{self.e}^{i}")
                parts.append(f"{a}*{z}" if i else str(a))
        return " + ".join(parts)

    def to_json(self):
        return {"conductor": self.e, "coeffs": [str(x) for x in self.c]}

    @staticmethod
    def from_json(d) -> "Cyclo":
        if isinstance(d, (int, str)):
            return Cyclo.rational(Fraction(d))
        return Cyclo(int(d["conductor"]), [Fraction(x) for x in d["coeffs"]])


def _reduce(e: int, p: Poly) -> Poly:
    if e == 1:
        return Poly([p(1)])
    return p.divmod(cyclotomic(e))[1]


def as_cyclo(x) -> Cyclo:
    if isinstance(x, Cyclo):
        return x
    return Cyclo.rational(Fraction(x))


ZERO = Cyclo.rational(0)
ONE = Cyclo.rational(1)


# ---------------------------------------------------------------- class functions

class ClassFunction:
    """Values on the conjugacy classes of ``group`` (in class order)."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Sequence):
        if len(values) != len(group.classes):
            raise ValueError("one value per conjugacy class expected")
        self.group = group
        self.values = tuple(as_cyclo(v) for v in values)

    @staticmethod
    def constant(group: FiniteGroup, c) -> "ClassFunction":
        return ClassFunction(group, [c] * len(group.classes))

    @staticmethod
    def trivial(group: FiniteGroup) -> "ClassFunction":
        return ClassFunction.constant(group, 1)

    @staticmethod
    def regular(group: FiniteGroup) -> "ClassFunction":
        return ClassFunction(group, [group.order] + [0] * (len(group.classes) - 1))

    @staticmethod
    def zero(group: FiniteGroup) -> "ClassFunction":
        return ClassFunction.constant(group, 0)

    @staticmethod
    def from_element_function(group: FiniteGroup, f: Callable[[int], object]) -> "ClassFunction":
        return ClassFunction(group, [f(r) for r in group.reps])

    def at(self, element: int) -> Cyclo:
        return self.values[self.group.class_of[element]]

    def _check(self, o):
        if isinstance(o, ClassFunction):
            if o.group is not self.group:
                raise ValueError("class functions on different groups")
            return o.values
        return [as_cyclo(o)] * len(self.values)

    def __add__(self, o):
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, self._check(o))])

    __radd__ = __add__

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __sub__(self, o):
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, self._check(o))])

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        return ClassFunction(self.group, [a * b for a, b in zip(self.values, self._check(o))])

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, ClassFunction):
            return all(v == o for v in self.values)
        return self.group is o.group and self.values == o.values

    def __hash__(self):
        return hash(self.values)

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, [v.conj() for v in self.values])

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.values)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def degree(self) -> Cyclo:
        return self.values[0]

    def __repr__(self):
        return f"ClassFunction({list(self.values)})"

    def to_json(self):
        return [v.to_json() if not v.is_rational() else str(v.c[0]) for v in self.values]


def inner_product(a: ClassFunction, b: ClassFunction) -> Cyclo:
    g = a.group
    s = ZERO
    for size, x, y in zip(g.class_sizes, a.values, b.values):
        s = s + x * y.conj() * size
    return s / g.order


def perm_character(group: FiniteGroup, points: Sequence) -> ClassFunction:
    """Character of the permutation action on a finite G-stable point set."""
    pts = set(tuple(p) for p in points)
    vals = []
    for r in group.reps:
        g = group.elements[r]
        cnt = 0
        for p in pts:
            q = g(p)
            if q not in pts:
                raise ValueError("point set is not G-stable")
            cnt += q == tuple(p)
        vals.append(cnt)
    return ClassFunction(group, vals)


def induce(group: FiniteGroup, sub: Sequence[int], chi: Callable[[int], object]) -> ClassFunction:
    """Ind_H^G of a class function given on the elements of H (indices into group)."""
    h = set(sub)
    if 0 not in h or any(group.mult[a][b] not in h for a in h for b in h):
        raise NotASubgroup("element set is not closed under multiplication")
    vals = []
    for r in group.reps:
        s = ZERO
        for x in range(group.order):
            y = group.conjugate(x, r)
            if y in h:
                s = s + as_cyclo(chi(y))
        vals.append(s / len(h))
    return ClassFunction(group, vals)


# ---------------------------------------------------------------- character tables

@dataclass
class CharacterTable:
    group: FiniteGroup
    names: list
    chars: list
    verified: bool = False

    def __post_init__(self):
        self.verify()

    def verify(self):
        g = self.group
        if len(self.chars) != len(g.classes):
            raise TableInvalid(f"{len(self.chars)} characters for {len(g.classes)} classes")
        for i, a in enumerate(self.chars):
            for j, b in enumerate(self.chars[: i + 1]):
                ip = inner_product(a, b)
                if ip != (1 if i == j else 0):
                    raise TableInvalid(f"<{self.names[i]},{self.names[j]}> = {ip}")
        if sum(c.values[0].to_fraction() ** 2 for c in self.chars) != g.order:
            raise TableInvalid("squared degrees do not sum to |G|")
        self.verified = True

    def by_name(self, name: str) -> ClassFunction:
        return self.chars[self.names.index(name)]

    def to_json(self):
        g = self.group
        return {
            "class_sizes": g.class_sizes,
            "characters": [{"name": n, "values": c.to_json()} for n, c in zip(self.names, self.chars)],
        }


def decompose(chi: ClassFunction, table: CharacterTable) -> list:
    out = []
    for name, irr in zip(table.names, table.chars):
        m = inner_product(chi, irr)
        if not m.is_integer():
            raise NotVirtualCharacter(f"multiplicity of {name} is {m}")
        out.append(int(m.to_fraction()))
    return out


def is_effective(chi: ClassFunction, table: CharacterTable) -> bool:
    return all(m >= 0 for m in decompose(chi, table))


def recompose(mults: Sequence[int], table: CharacterTable) -> ClassFunction:
    out = ClassFunction.zero(table.group)
    for m, c in zip(mults, table.chars):
        out = out + c * m
    return out


def char_table_abelian(group: FiniteGroup) -> CharacterTable:
    if not group.is_abelian():
        raise TableInvalid("group is not abelian")
    e = group.exponent
    gens = []
    span = [0]
    for x in sorted(range(group.order), key=lambda i: -group.orders[i]):
        if x not in span:
            gens.append(x)
            span = group.subgroup_generated(gens)
    chars = []
    seen = set()
    for ks in itertools.product(*[range(group.orders[g]) for g in gens]):
        val = {0: 0}
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for g, k in zip(gens, ks):
                y = group.mult[x][g]
                v = (val[x] + k * (e // group.orders[g])) % e
                if y in val:
                    if val[y] != v:
                        ok = False
                        break
                else:
                    val[y] = v
                    queue.append(y)
        if not ok:
            continue
        key = tuple(val[r] for r in group.reps)
        if key in seen:
            continue
        seen.add(key)
        chars.append(key)
    chars.sort(key=lambda k: (any(k), k))
    fns = [ClassFunction(group, [Cyclo.root(e, k) for k in key]) for key in chars]
    if group.order == 2:
        names = ["triv", "sign"]
    else:
        names = ["triv"] + [f"chi{i}" for i in range(1, len(fns))]
    return CharacterTable(group, names, fns)


def _dihedral_generators(group: FiniteGroup):
    n2 = group.order
    if n2 % 2 or n2 < 6 or group.is_abelian():
        return None
    n = n2 // 2
    for r in range(group.order):
        if group.orders[r] != n:
            continue
        rot = group.subgroup_generated([r])
        for s in range(group.order):
            if s in rot or group.orders[s] != 2:
                continue
            if group.mult[group.mult[s][r]][s] == group.inv[r]:
                return r, s
    return None


def char_table_dihedral(group: FiniteGroup) -> Optional[CharacterTable]:
    """Table of D_n (order 2n) when the group is recognised as dihedral."""
    found = _dihedral_generators(group)
    if found is None:
        return None
    r, s = found
    n = group.order // 2
    word = {}
    p = 0
    for k in range(n):
        word[p] = (0, k)
        word[group.mult[s][p]] = (1, k)
        p = group.mult[p][r]
    reps = [word[x] for x in group.reps]
    names, chars = [], []

    def lin(a, b):
        return ClassFunction(group, [(a ** k) * (b ** f) for f, k in reps])

    names += ["triv", "sign"]
    chars += [lin(1, 1), lin(1, -1)]
    if n % 2 == 0:
        names += ["eps1", "eps2"]
        chars += [lin(-1, 1), lin(-1, -1)]
    for h in range(1, (n - 1) // 2 + 1):
        vals = []
        for f, k in reps:
            vals.append(ZERO if f else Cyclo.root(n, h * k) + Cyclo.root(n, -h * k))
        names.append(f"rho{h}")
        chars.append(ClassFunction(group, vals))
    return CharacterTable(group, names, chars)


def partitions(n: int, maxpart: Optional[int] = None):
    maxpart = n if maxpart is None else maxpart
    if n == 0:
        yield ()
        return
    for k in range(min(n, maxpart), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def sn_character(lam: tuple, mu: tuple) -> int:
    """Murnaghan-Nakayama rule via beta sets."""
    if not mu:
        return 1 if sum(lam) == 0 else 0
    r, rest = mu[0], mu[1:]
    L = len(lam)
    beta = [lam[i] + (L - 1 - i) for i in range(L)]
    bset = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in bset:
            continue
        height = sum(1 for x in beta if b - r < x < b)
        nb = sorted((bset - {b}) | {b - r}, reverse=True)
        newlam = tuple(x - (L - 1 - i) for i, x in enumerate(nb))
        newlam = tuple(x for x in newlam if x > 0)
        total += (-1) ** height * sn_character(newlam, rest)
    return total


def cycle_type(perm: Sequence[int]) -> tuple:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            k += 1
        out.append(k)
    return tuple(sorted(out, reverse=True))


def permutation_on(group: FiniteGroup, element: int, domain: Sequence) -> list:
    pos = {tuple(p): i for i, p in enumerate(domain)}
    g = group.elements[element]
    return [pos[g(p)] for p in domain]


def char_table_symmetric(group: FiniteGroup, domain: Sequence) -> Optional[CharacterTable]:
    """Table of S_n when the group acts on ``domain`` (n points) as the full symmetric group."""
    n = len(domain)
    if group.order != math.factorial(n):
        return None
    try:
        perms = [tuple(permutation_on(group, i, domain)) for i in range(group.order)]
    except KeyError:
        return None
    if len(set(perms)) != group.order:
        return None
    types = [cycle_type(permutation_on(group, r, domain)) for r in group.reps]
    names, chars = [], []
    for lam in partitions(n):
        names.append("S[" + ",".join(map(str, lam)) + "]")
        chars.append(ClassFunction(group, [sn_character(lam, mu) for mu in types]))
    names[0] = "triv"
    names[-1] = "sign"
    return CharacterTable(group, names, chars)


def char_table_from_input(group: FiniteGroup, data: dict, generators: Optional[Sequence[int]] = None) -> CharacterTable:
    """Verified table from JSON: classes given by words in the generators."""
    try:
        classes = data["classes"]
        col = []
        for c in classes:
            x = 0
            for w in c["word"]:
                gi = generators[abs(w) - 1]
                x = group.mult[x][gi if w > 0 else group.inv[gi]]
            col.append(group.class_of[x])
        if sorted(col) != list(range(len(group.classes))):
            raise TableInvalid("class words do not hit every conjugacy class once")
        if "size" in classes[0]:
            if [c["size"] for c in classes] != [group.class_sizes[k] for k in col]:
                raise TableInvalid("class sizes do not match")
        names, chars = [], []
        for ch in data["characters"]:
            vals = [None] * len(col)
            for k, v in zip(col, ch["values"]):
                vals[k] = Cyclo.from_json(v)
            names.append(ch["name"])
            chars.append(ClassFunction(group, vals))
    except (KeyError, IndexError, TypeError) as exc:
        raise TableInvalid(f"malformed character table: {exc}") from exc
    return CharacterTable(group, names, chars)


def char_table_auto(group: FiniteGroup, candidate_domains: Sequence = ()) -> Optional[CharacterTable]:
    """Best available table: abelian, dihedral, or symmetric on a candidate G-set."""
    if group.is_abelian():
        return char_table_abelian(group)
    t = char_table_dihedral(group)
    if t is not None:
        return t
    for dom in candidate_domains:
        t = char_table_symmetric(group, dom)
        if t is not None:
            return t
    return None


def format_class_function(chi: ClassFunction, table: Optional[CharacterTable] = None) -> str:
    """Short name: integers, multiples of chi_reg, or irreducible sums."""
    g = chi.group
    rest = chi.values[1:]
    if all(v.is_rational() for v in chi.values) and all(v == (rest[0] if rest else chi.values[0]) for v in rest):
        a = rest[0].to_fraction() if rest else chi.values[0].to_fraction()
        b = (chi.values[0].to_fraction() - a) / g.order
        if b.denominator == 1 and a.denominator == 1 and (table is None or (a >= 0 and b >= 0)):
            return _lin_combo([(a, ""), (b, "chi_reg")])
    if table is not None:
        try:
            mults = decompose(chi, table)
            return _lin_combo([(m, n) for m, n in zip(mults, table.names)])
        except NotVirtualCharacter:
            pass
    return "[" + ", ".join(map(repr, chi.values)) + "]"


def _lin_combo(terms) -> str:
    parts = []
    for k, name in terms:
        if k == 0:
            continue
        if not name:
            parts.append(str(k))
        elif k == 1:
            parts.append(name)
        elif k == -1:
            parts.append("-" + name)
        else:
            parts.append(f"{k}*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
