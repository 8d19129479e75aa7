"""Instances (polytope + affine group action) and builders for the standard examples.

Builders take the construction in its natural ambient coordinates and move it
to standard coordinates on the affine lattice aff(P) ∩ M through a LatticeChart.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import exactlin as el
from .group_action import AffineMap, FiniteGroup, close_group, orbit
from .polytope import (LatticeChart, RationalPolytope, induced_on_quotient, quotient_projection)
from .repr_ring import CharacterTable, char_table_auto, char_table_from_input


@dataclass
class Instance:
    name: str
    polytope: RationalPolytope
    generators: list
    group: FiniteGroup = None
    table: Optional[CharacterTable] = None
    chart: Optional[LatticeChart] = None
    labels: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.group is None:
            self.group = close_group(self.generators, dim=self.polytope.n)
        if self.table is None:
            self.table = char_table_auto(self.group, candidate_domains(self.polytope, self.group))

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def to_local(self, x) -> tuple:
        return self.chart.to_local(x) if self.chart else el.rat_vector(x)


def candidate_domains(P: RationalPolytope, group: FiniteGroup) -> list:
    """Orbits of face barycenters that could carry a natural S_n action."""
    n = 2
    while math.factorial(n) < group.order:
        n += 1
    if math.factorial(n) != group.order or n < 4:
        return []
    out = []
    seen = set()
    for f in P.faces:
        b = P.face_polytope(f).barycenter
        orb = tuple(orbit(group, b))
        if len(orb) == n and orb not in seen:
            seen.add(orb)
            out.append(list(orb))
    return out


def make_instance(name: str, vertices: Sequence, generators: Sequence, lattice: Optional[el.LatticeBasis] = None,
                  table_data: Optional[dict] = None, labels: Optional[dict] = None) -> Instance:
    """Build an instance from ambient data.

    ``generators`` is a list of (linear, translation) pairs acting on ambient points.
    """
    chart = LatticeChart(vertices, lattice)
    local_vertices = [chart.to_local(v) for v in vertices]
    P = RationalPolytope(local_vertices)
    gens = [chart.local_map(lin, tr) for lin, tr in generators]
    inst = Instance(name, P, gens, chart=chart, labels=dict(labels or {}))
    if table_data is not None:
        inst.table = char_table_from_input(inst.group, table_data, _generator_indices(inst))
    return inst


def from_local(name: str, vertices: Sequence, generators: Sequence[AffineMap], labels: Optional[dict] = None) -> Instance:
    return Instance(name, RationalPolytope(vertices), list(generators), labels=dict(labels or {}))


def _generator_indices(inst: Instance) -> list:
    return [inst.group.index(g) for g in inst.generators]


def perm_matrix(p: Sequence[int]) -> list:
    """Matrix sending e_j to e_{p[j]}."""
    n = len(p)
    return [[1 if p[j] == i else 0 for j in range(n)] for i in range(n)]


def _unit(n: int, i: int) -> list:
    return [1 if j == i else 0 for j in range(n)]


# ---------------------------------------------------------------- builders

def square_swap() -> Instance:
    """[0,1]^2 with the coordinate swap."""
    return make_instance("square_swap", [(0, 0), (1, 0), (0, 1), (1, 1)], [(perm_matrix([1, 0]), [0, 0])])


def klein_cube() -> Instance:
    """[-1,1]^3 in the affine lattice (1,1,1) + 2Z^3 with a Klein four-group of rotations."""
    verts = list(itertools.product([-1, 1], repeat=3))
    sigma = ([[0, 1, 0], [1, 0, 0], [0, 0, -1]], [0, 0, 0])
    tau = ([[0, -1, 0], [-1, 0, 0], [0, 0, -1]], [0, 0, 0])
    lat = el.LatticeBasis.from_rows([[2, 0, 0], [0, 2, 0], [0, 0, 2]], offset=(1, 1, 1))
    return make_instance("klein_cube", verts, [sigma, tau], lattice=lat)


def p5_reflexive() -> Instance:
    """Hull of e_i and e_i + e_{i+1} in Z^5/Z(1,...,1) with the cyclic shift."""
    proj = quotient_projection([1] * 5)
    shift = perm_matrix([1, 2, 3, 4, 0])
    e = [el.matvec(proj, _unit(5, i)) for i in range(5)]
    f = [el.matvec(proj, [a + b for a, b in zip(_unit(5, i), _unit(5, (i + 1) % 5))]) for i in range(5)]
    g = induced_on_quotient(proj, shift)
    inst = make_instance("p5_reflexive", e + f, [(g, [0] * 4)])
    inst.labels.update({f"e{i + 1}": inst.to_local(e[i]) for i in range(5)})
    inst.labels.update({f"f{i + 1}": inst.to_local(f[i]) for i in range(5)})
    return inst


def z3_prism_quotient() -> Instance:
    """Q × [0, e4] with Q = Conv(ē1, ē2, ē3) in Z^3/Z(1,1,1) ⊕ Z, Z/3 cycling ē_i."""
    proj3 = quotient_projection([1, 1, 1])
    proj = [r + [0] for r in proj3] + [[0, 0, 0, 1]]
    cyc = perm_matrix([1, 2, 0, 3])
    pts = []
    for h in (0, 1):
        for i in range(3):
            v = _unit(4, i)
            v[3] = h
            pts.append(el.matvec(proj, v))
    g = induced_on_quotient(proj, cyc)
    inst = make_instance("z3_prism_quotient", pts, [(g, [0, 0, 0])])
    inst.labels["square_face"] = [inst.to_local(p) for p in (pts[0], pts[1], pts[3], pts[4])]
    return inst


def circuit(a: Sequence[int], blocks: str = "swap") -> Instance:
    """Hull of ē_i, f̄_i in Z^{2r}/Z(Σ a_i(e_i - f_i)) at height one, with ē_i <-> f̄_i."""
    r = len(a)
    v = list(a) + [-x for x in a]
    proj = quotient_projection(v)
    if blocks == "swap":
        perm = [i + r for i in range(r)] + list(range(r))
    else:
        # ē1 -> f̄1 -> ē2 -> f̄2 -> ē1, remaining pairs swapped
        perm = [i + r for i in range(r)] + list(range(r))
        perm[0], perm[r], perm[1], perm[r + 1] = r, 1, r + 1, 0
    pts = [el.matvec(proj, _unit(2 * r, i)) for i in range(2 * r)]
    g = induced_on_quotient(proj, perm_matrix(perm))
    name = "circuit_" + "".join(map(str, a)) + ("" if blocks == "swap" else "_4cycle")
    inst = make_instance(name, pts, [(g, [0] * (2 * r - 1))])
    inst.labels["e"] = [inst.to_local(p) for p in pts[:r]]
    inst.labels["f"] = [inst.to_local(p) for p in pts[r:]]
    return inst


def sym_prism(d: int, generators: Optional[Sequence[Sequence[int]]] = None, name: Optional[str] = None) -> Instance:
    """Conv(e_1..e_d) × [0, e_{d+1}] in {Σ_{i≤d} u_i = 1} with permutations of the first d coordinates."""
    pts = []
    for h in (0, 1):
        for i in range(d):
            v = _unit(d + 1, i)
            v[d] = h
            pts.append(v)
    if generators is None:
        generators = [[1, 0] + list(range(2, d)), list(range(1, d)) + [0]]
    gens = [(perm_matrix(list(p) + [d]), [0] * (d + 1)) for p in generators]
    inst = make_instance(name or f"sym_prism_{d}", pts, gens)
    inst.labels["bottom"] = [inst.to_local(p) for p in pts[:d]]
    return inst


def permutahedron(d: int, generators: Optional[Sequence[Sequence[int]]] = None, name: Optional[str] = None) -> Instance:
    """Hull of the S_{d+1}-orbit of (1, ..., d+1)."""
    n = d + 1
    pts = [list(p) for p in itertools.permutations(range(1, n + 1))]
    if generators is None:
        generators = [[1, 0] + list(range(2, n)), list(range(1, n)) + [0]] if n > 2 else [[1, 0]]
    gens = [(perm_matrix(p), [0] * n) for p in generators]
    return make_instance(name or f"permutahedron_{d}", pts, gens)


def cross_polytope_2d() -> Instance:
    """Conv(±e1, ±e2) with the central symmetry."""
    return make_instance("cross_polytope_2d", [(1, 0), (-1, 0), (0, 1), (0, -1)], [([[-1, 0], [0, -1]], [0, 0])])


def bipyramid() -> Instance:
    """Conv([0,1]^2 × 0, (0,0,1), (1,1,-1)) with (x,y,z) -> (1-x-z, y, z)."""
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 1, -1)]
    return make_instance("bipyramid", pts, [([[-1, 0, -1], [0, 1, 0], [0, 0, 1]], [1, 0, 0])])


def unit_simplex(d: int) -> Instance:
    pts = [[0] * d] + [_unit(d, i) for i in range(d)]
    return make_instance(f"unit_simplex_{d}", pts, [])


def dim2_catalog() -> list:
    """Rank-2 affine actions on invariant polygons, including both forbidden types."""
    sq = [(0, 0), (1, 0), (0, 1), (1, 1)]
    big = [(-1, -1), (1, -1), (-1, 1), (1, 1)]
    hexagon = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    tri = [(0, 0), (1, 0), (0, 1)]
    rot90 = [[0, -1], [1, 0]]
    rot60 = [[0, -1], [1, 1]]
    cat = [
        ("trivial_square", sq, []),
        ("swap_square", sq, [([[0, 1], [1, 0]], [0, 0])]),
        ("rot90_half_center", sq, [(rot90, [1, 0])]),
        ("reflection_x_half", sq, [([[-1, 0], [0, 1]], [1, 0])]),
        ("central_half_center", sq, [([[-1, 0], [0, -1]], [1, 1])]),
        ("dihedral_square", sq, [(rot90, [1, 0]), ([[0, 1], [1, 0]], [0, 0])]),
        ("rot90_origin", big, [(rot90, [0, 0])]),
        ("dihedral_origin", big, [(rot90, [0, 0]), ([[1, 0], [0, -1]], [0, 0])]),
        ("rot60_hexagon", hexagon, [(rot60, [0, 0])]),
        ("dihedral_hexagon", hexagon, [(rot60, [0, 0]), ([[0, 1], [1, 0]], [0, 0])]),
        ("rot120_triangle", tri, [([[-1, -1], [1, 0]], [1, 0])]),
        ("reflection_rectangle", [(0, 0), (1, 0), (0, 2), (1, 2)], [([[-1, 0], [0, 1]], [1, 0])]),
        ("swap_triangle", tri, [([[0, 1], [1, 0]], [0, 0])]),
    ]
    return [make_instance(name, pts, gens) for name, pts, gens in cat]


def standard_corpus() -> list:
    """The standard example instances."""
    return [
        square_swap(),
        klein_cube(),
        p5_reflexive(),
        z3_prism_quotient(),
        circuit((1, 1, 1)),
        circuit((1, 1, 2)),
        circuit((1, 1, 1), blocks="4cycle"),
        sym_prism(3),
        sym_prism(3, [[1, 2, 0]], name="z3_prism"),
        sym_prism(4),
        permutahedron(2),
        permutahedron(3),
        cross_polytope_2d(),
        bipyramid(),
    ]


# ---------------------------------------------------------------- JSON instance files

class InstanceError(ValueError):
    """Malformed instance file."""


def _parse_rational(x) -> Fraction:
    try:
        return Fraction(x) if not isinstance(x, float) else Fraction(x).limit_denominator()
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InstanceError(f"bad rational {x!r}") from exc


def _parse_int_matrix(m, where: str) -> list:
    try:
        out = [[int(x) for x in row] for row in m]
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: integer matrix expected") from exc
    if any(len(r) != len(out[0]) for r in out):
        raise InstanceError(f"{where}: ragged matrix")
    return out


def instance_from_json(data: dict) -> Instance:
    """Parse an instance document; vertices are rationals (numbers or "p/q" strings)."""
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    try:
        verts = [tuple(_parse_rational(x) for x in v) for v in data["vertices"]]
        gens_raw = data.get("generators", [])
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"missing field: {exc}") from exc
    if not verts:
        raise InstanceError("no vertices")
    n = len(verts[0])
    if any(len(v) != n for v in verts) or ("dim" in data and data["dim"] != n):
        raise InstanceError("vertex dimensions disagree")
    gens = []
    for i, g in enumerate(gens_raw):
        lin = _parse_int_matrix(g["linear"], f"generator {i}")
        tr = [_parse_rational(x) for x in g.get("translation", [0] * n)]
        if len(lin) != n or len(lin[0]) != n or len(tr) != n:
            raise InstanceError(f"generator {i}: wrong size")
        gens.append((lin, tr))
    name = data.get("name", "instance")
    lattice = None
    if "lattice" in data:
        lat = data["lattice"]
        lattice = el.LatticeBasis.from_rows(_parse_int_matrix(lat["basis"], "lattice"), n, lat.get("offset"))
    if lattice is None and el.rank([list(el.vsub(v, verts[0])) for v in verts[1:]] or [[0] * n]) == n:
        # full-dimensional in the standard lattice: no chart needed
        maps = []
        for lin, tr in gens:
            if not el.is_integral(tr):
                raise InstanceError("translation must be integral")
            maps.append(AffineMap.from_parts(lin, [int(x) for x in tr]))
        inst = Instance(name, RationalPolytope(verts), maps or [AffineMap.identity(n)], group=None)
    else:
        inst = make_instance(name, verts, gens or [(el.identity(n), [0] * n)], lattice=lattice)
    if "character_table" in data:
        inst.table = char_table_from_input(inst.group, data["character_table"], _generator_indices(inst))
    for k, v in data.get("labels", {}).items():
        if v and isinstance(v[0], list):
            inst.labels[k] = [inst.to_local([_parse_rational(x) for x in p]) for p in v]
        else:
            inst.labels[k] = inst.to_local([_parse_rational(x) for x in v])
    inst.extra = {k: data[k] for k in ("triangulations", "monotonicity", "description", "kind") if k in data}
    return inst


def _rat_str(x) -> str:
    return str(Fraction(x))


def instance_to_json(inst: Instance, extra: Optional[dict] = None) -> dict:
    """Document in the instance's own (standard) coordinates."""
    P = inst.polytope
    out = {
        "name": inst.name,
        "dim": P.n,
        "vertices": [[_rat_str(x) for x in v] for v in P.vertices],
        "generators": [{"linear": g.linear, "translation": list(g.translation)} for g in inst.generators],
    }
    if inst.labels:
        labels = {}
        for k, v in inst.labels.items():
            if v and isinstance(v[0], tuple):
                labels[k] = [[_rat_str(x) for x in p] for p in v]
            else:
                labels[k] = [_rat_str(x) for x in v]
        out["labels"] = labels
    if extra:
        out.update(extra)
    return out
