"""Regular subdivisions, pulling refinements and G-invariant triangulations.

Complexes are stored by their maximal cells, each a frozenset of indices into a
shared point list. A regular complex carries a lexicographic height certificate:
starting from ``base_cells``, refining successively by each height function in
``heights`` reproduces the cells.
"""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import exactlin as el
from .group_action import AffineMap, FiniteGroup, charpoly, fixed_point
from .polytope import (NotInvariant, RationalPolytope, lattice_points, normalized_volume)


class HypothesisViolated(ValueError):
    """A hypothesis of the orbit-pulling construction fails at a given step."""

    def __init__(self, step: int, face=None, reason: str = ""):
        self.step = step
        self.face = face
        self.reason = reason
        super().__init__(f"step {step}: {reason}" + (f" (face {face})" if face is not None else ""))


class NotTranslative(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"action is not translative: {witness}")


class PreconditionFailed(ValueError):
    pass


@lru_cache(maxsize=200000)
def _polytope(coords: tuple) -> RationalPolytope:
    return RationalPolytope(coords)


def _key(x) -> tuple:
    return tuple(Fraction(c) for c in x)


# ---------------------------------------------------------------- complexes

class PolyComplex:
    def __init__(self, points: Sequence, cells: Iterable, heights: Optional[list] = None,
                 base_cells: Optional[Iterable] = None):
        self.points = [_key(p) for p in points]
        self.index = {p: i for i, p in enumerate(self.points)}
        self.cells = _maximal({frozenset(c) for c in cells})
        self.heights = heights
        self.base_cells = _maximal({frozenset(c) for c in base_cells}) if base_cells is not None else None

    # -- geometry of cells
    def coords(self, cell) -> tuple:
        return tuple(sorted(self.points[i] for i in cell))

    def polytope(self, cell) -> RationalPolytope:
        return _polytope(self.coords(cell))

    def cell_dim(self, cell) -> int:
        return self.polytope(cell).dim

    @property
    def dim(self) -> int:
        return max(self.cell_dim(c) for c in self.cells)

    @property
    def vertex_indices(self) -> list:
        return sorted(set().union(*self.cells))

    @property
    def vertices(self) -> list:
        return [self.points[i] for i in self.vertex_indices]

    def is_simplex(self, cell) -> bool:
        return len(cell) == self.cell_dim(cell) + 1

    def is_triangulation(self) -> bool:
        return all(self.is_simplex(c) for c in self.cells)

    @property
    def denominator(self) -> int:
        return el.lcm_denominators([x for v in self.vertices for x in v])

    def contains(self, cell, x) -> bool:
        return self.polytope(cell).contains(x)

    def face_sets(self, cell) -> list:
        """Nonempty faces of a cell as index sets."""
        if self.is_simplex(cell):
            items = sorted(cell)
            return [frozenset(s) for k in range(1, len(items) + 1) for s in itertools.combinations(items, k)]
        cp = self.polytope(cell)
        return [frozenset(self.index[cp.vertices[j]] for j in f) for f in cp.faces]

    @property
    def faces(self) -> list:
        if not hasattr(self, "_faces"):
            out = set()
            for c in self.cells:
                out.update(self.face_sets(c))
            self._faces = sorted(out, key=lambda f: (len(f), sorted(self.points[i] for i in f)))
        return self._faces

    def face_dim(self, f) -> int:
        return self.polytope(f).dim

    # -- points
    def with_points(self, pts: Iterable) -> tuple["PolyComplex", list]:
        """Copy with extra points appended to the pool; returns the copy and the indices of ``pts``."""
        new = list(self.points)
        idx = dict(self.index)
        out = []
        for p in pts:
            p = _key(p)
            if p not in idx:
                idx[p] = len(new)
                new.append(p)
            out.append(idx[p])
        c = PolyComplex(new, self.cells, list(self.heights) if self.heights is not None else None, self.base_cells)
        return c, out

    def replace_cells(self, cells, extra_height: Optional[dict] = None) -> "PolyComplex":
        h = None
        if self.heights is not None and extra_height is not None:
            h = list(self.heights) + [dict(extra_height)]
        return PolyComplex(self.points, cells, h, self.base_cells)

    # -- group action
    def image_cell(self, g: AffineMap, cell) -> Optional[frozenset]:
        out = set()
        for i in cell:
            j = self.index.get(g(self.points[i]))
            if j is None:
                return None
            out.add(j)
        return frozenset(out)

    def is_invariant(self, group: FiniteGroup) -> bool:
        cs = set(self.cells)
        return all(self.image_cell(g, c) in cs for g in group.elements for c in self.cells)

    # -- restriction
    def restrict(self, Q: RationalPolytope) -> list:
        """Maximal faces contained in Q."""
        inside = [f for f in self.faces if all(Q.contains(self.points[i]) for i in f)]
        return _maximal(set(inside))

    def restricts_to(self, Q: RationalPolytope) -> bool:
        """Faces of the complex inside Q cover Q."""
        cells = [c for c in self.restrict(Q) if self.face_dim(c) == Q.dim]
        if Q.dim == 0:
            return len(cells) == 1
        total = sum((_relative_volume(Q, self.coords(c)) for c in cells), Fraction(0))
        return total == _relative_volume(Q, Q.vertices)

    # -- serialization
    def to_json(self, group: Optional[FiniteGroup] = None, N: Optional[int] = None) -> dict:
        used = self.vertex_indices
        pos = {i: k for k, i in enumerate(used)}
        out = {
            "N": N if N is not None else self.denominator,
            "vertices": [[str(x) for x in self.points[i]] for i in used],
            "facets": [sorted(pos[i] for i in c) for c in self.cells],
        }
        if group is not None:
            labels = {}
            orbit_id = 0
            for i in used:
                if i in labels:
                    continue
                for g in group.elements:
                    j = self.index.get(g(self.points[i]))
                    if j is not None and j not in labels:
                        labels[j] = orbit_id
                orbit_id += 1
            out["orbits"] = [labels[i] for i in used]
        if self.heights is not None:
            out["heights"] = [{str(pos.get(i, -1)) if i in pos else "p" + ",".join(map(str, self.points[i])): str(v)
                               for i, v in h.items()} for h in self.heights]
        return out

    @staticmethod
    def from_json(data: dict) -> "PolyComplex":
        pts = [tuple(Fraction(x) for x in v) for v in data["vertices"]]
        return PolyComplex(pts, [frozenset(c) for c in data["facets"]])

    def to_off(self) -> str:
        used = self.vertex_indices
        pos = {i: k for k, i in enumerate(used)}
        lines = ["OFF", f"{len(used)} {len(self.cells)} 0"]
        lines += [" ".join(str(x) for x in self.points[i]) for i in used]
        lines += [" ".join([str(len(c))] + [str(pos[i]) for i in sorted(c)]) for c in self.cells]
        return "\n".join(lines) + "\n"

    def same_cells(self, other: "PolyComplex") -> bool:
        a = {frozenset(self.points[i] for i in c) for c in self.cells}
        b = {frozenset(other.points[i] for i in c) for c in other.cells}
        return a == b

    def __repr__(self):
        return f"PolyComplex(cells={len(self.cells)}, vertices={len(self.vertex_indices)})"


def _maximal(cells: set) -> list:
    ordered = sorted(cells, key=lambda c: (-len(c), sorted(c)))
    keep = []
    for c in ordered:
        if not any(c < k for k in keep):
            keep.append(c)
    return sorted(keep, key=sorted)


def _relative_volume(Q: RationalPolytope, coords: Sequence) -> Fraction:
    """Volume of Conv(coords) ⊂ aff(Q) in Q's affine coordinates (unnormalized scale)."""
    loc = [Q.aff.local(p) for p in coords]
    P = _polytope(tuple(sorted(set(loc))))
    total = Fraction(0)
    for s in P.pulling_triangulation:
        vs = [P.vertices[i] for i in sorted(s)]
        total += abs(Fraction(el.det([list(el.vsub(v, vs[0])) for v in vs[1:]]))) if len(vs) > 1 else Fraction(1)
    return total


def trivial_subdivision(P: RationalPolytope) -> PolyComplex:
    cell = frozenset(range(len(P.vertices)))
    return PolyComplex(P.vertices, [cell], heights=[], base_cells=[cell])


def subcomplex(P: RationalPolytope, faces: Iterable) -> PolyComplex:
    """Polytopal complex formed by the given faces of P (vertex-index sets) and their faces."""
    cells = [frozenset(f) for f in faces]
    return PolyComplex(P.vertices, cells, heights=[], base_cells=cells)


def faces_avoiding(P: RationalPolytope, Q: RationalPolytope) -> list:
    """Faces of P disjoint from Q (as vertex-index sets)."""
    out = []
    for f in P.faces:
        F = P.face_polytope(f)
        if not _intersects(F, Q):
            out.append(f)
    return out


def _intersects(A: RationalPolytope, B: RationalPolytope) -> bool:
    """Exact test whether two polytopes meet, by vertex enumeration of A ∩ B."""
    return bool(_intersection_vertices(A, B))


def _intersection_vertices(A: RationalPolytope, B: RationalPolytope) -> list:
    n = A.n
    eqs = [(list(a), b) for a, b in A.eqs + B.eqs]
    ineqs = [(list(a), b) for a, b in A.ineqs + B.ineqs]
    out = set()
    base_rows = [e[0] for e in eqs]
    base_rhs = [e[1] for e in eqs]
    r0 = el.rank(base_rows) if base_rows else 0
    need = n - r0
    for combo in itertools.combinations(range(len(ineqs)), need):
        rows = base_rows + [ineqs[i][0] for i in combo]
        if el.rank(rows) != n:
            continue
        x = el.solve_rational(rows, base_rhs + [ineqs[i][1] for i in combo])
        if x is None:
            continue
        if all(el.dot(a, x) == b for a, b in eqs) and all(el.dot(a, x) >= b for a, b in ineqs):
            out.add(tuple(x))
    if need == 0:
        x = el.solve_rational(base_rows, base_rhs)
        if x is not None and all(el.dot(a, x) >= b for a, b in ineqs):
            out.add(tuple(x))
    return sorted(out)


# ---------------------------------------------------------------- regular refinements

def _lower_hull_cells(coords: Sequence, heights: Sequence) -> list:
    """Index sets (into coords) of the vertices of the lower faces of the lifted configuration."""
    base = _polytope(tuple(sorted(set(coords))))
    loc = [base.aff.local(p) for p in coords]
    k = base.dim
    if k == 0:
        return [frozenset([min(range(len(coords)), key=lambda i: heights[i])])]
    lifted = [tuple(l) + (Fraction(h),) for l, h in zip(loc, heights)]
    L = _polytope(tuple(sorted(set(lifted))))
    if L.dim == k:
        # heights are affine on the cell: nothing to refine
        return [frozenset(i for i, p in enumerate(coords) if p in set(base.vertices))]
    out = []
    for a, b in L.ineqs:
        if a[-1] <= 0:
            continue
        members = [i for i, p in enumerate(lifted) if el.dot(a, p) == b]
        sub = _polytope(tuple(sorted({loc[i] for i in members})))
        verts = set(sub.vertices)
        out.append(frozenset(i for i in members if loc[i] in verts))
    return out


def regular_refinement(S: PolyComplex, omega: dict) -> PolyComplex:
    """Refine every cell by the lower hull of ω on the points of dom(ω) it contains (absent values count as 0)."""
    dom = sorted(omega)
    cells = []
    for cell in S.cells:
        cp = S.polytope(cell)
        cand = sorted(set(cell) | {i for i in dom if i not in cell and cp.contains(S.points[i])})
        hs = [Fraction(omega.get(i, 0)) for i in cand]
        for sub in _lower_hull_cells([S.points[i] for i in cand], hs):
            cells.append(frozenset(cand[j] for j in sub))
    return S.replace_cells(cells, omega)


def regular_subdivision(P: RationalPolytope, heights: dict) -> PolyComplex:
    """S(ω) for ω given on points of P (a dict point -> height; vertices default to 0)."""
    S = trivial_subdivision(P)
    S, idx = S.with_points(heights.keys())
    omega = {i: Fraction(h) for i, h in zip(idx, heights.values())}
    return regular_refinement(S, omega)


def pulling_refinement(S: PolyComplex, J: Iterable) -> PolyComplex:
    """S_J: regular refinement by ω = -1 on J and 0 elsewhere."""
    S, idx = S.with_points(J)
    return regular_refinement(S, {i: Fraction(-1) for i in idx})


def _pull_cell_local(S: PolyComplex, cell, u: int) -> list:
    """Facets of S_u restricted to a cell containing u: Conv(F', u) over facets F' not containing u."""
    cp = S.polytope(cell)
    x = S.points[u]
    if cp.dim == 0:
        return [cell]
    out = []
    for fac in cp.facets:
        F = cp.face_polytope(fac)
        if F.contains(x):
            continue
        out.append(frozenset(S.index[cp.vertices[j]] for j in fac) | {u})
    return out


def pull_point(S: PolyComplex, u) -> PolyComplex:
    """Single-point pulling refinement computed by the local rule."""
    S, (i,) = S.with_points([u])
    cells = []
    for cell in S.cells:
        if S.contains(cell, S.points[i]):
            cells.extend(_pull_cell_local(S, cell, i))
        else:
            cells.append(cell)
    return S.replace_cells(cells, {i: Fraction(-1)})


def _pull_orbit(S: PolyComplex, J: Sequence) -> PolyComplex:
    S, idx = S.with_points(J)
    cells = []
    for cell in S.cells:
        cp = S.polytope(cell)
        inside = [i for i in idx if cp.contains(S.points[i])]
        if not inside:
            cells.append(cell)
        elif len(inside) == 1:
            cells.extend(_pull_cell_local(S, cell, inside[0]))
        else:
            cand = sorted(set(cell) | set(inside))
            hs = [Fraction(-1) if i in inside else Fraction(0) for i in cand]
            for sub in _lower_hull_cells([S.points[i] for i in cand], hs):
                cells.append(frozenset(cand[j] for j in sub))
    return S.replace_cells(cells, {i: Fraction(-1) for i in idx})


def verify_regular(S: PolyComplex) -> Optional[bool]:
    """Recompute the complex from its base cells and height certificate; None when no certificate."""
    if S.heights is None or S.base_cells is None:
        return None
    R = PolyComplex(S.points, S.base_cells, heights=[], base_cells=S.base_cells)
    for h in S.heights:
        R = regular_refinement(R, h)
    return set(R.cells) == set(S.cells)


# ---------------------------------------------------------------- orbit pulls

def orbit_points(group: FiniteGroup, x) -> list:
    x = _key(x)
    return sorted({g(x) for g in group.elements})


def _covered(S: PolyComplex, face, pts) -> list:
    F = S.polytope(face)
    return [p for p in pts if F.contains(p)]


def orbit_pull_triangulate(S, group: FiniteGroup, sequence: Sequence) -> PolyComplex:
    """Pull successively by the orbits G·u_1, ..., G·u_r after checking the hypotheses of the construction.

    ``S`` is an invariant regular subdivision (or a polytope, meaning its trivial subdivision).
    T(i) is the set of faces of S avoiding the first i orbits; it must end with simplices only,
    each u_i must lie in Supp(T(i-1)) and meet every face of T(i-1) at most once along its orbit.
    """
    if isinstance(S, RationalPolytope):
        S = trivial_subdivision(S)
    if not S.is_invariant(group):
        raise NotInvariant("subdivision is not invariant")
    faces = list(S.faces)
    covered: list = []
    T = faces
    R = S
    for step, u in enumerate(sequence, start=1):
        orb = orbit_points(group, u)
        holders = [F for F in T if S.polytope(F).contains(_key(u))]
        if not holders:
            raise HypothesisViolated(step, None, "u is not in the support of T(i-1)")
        for F in T:
            hit = _covered(S, F, orb)
            if len(hit) > 1:
                raise HypothesisViolated(step, S.coords(F), f"orbit meets a face of T(i-1) in {len(hit)} points")
        R = _pull_orbit(R, orb)
        covered.extend(orb)
        T = [F for F in T if not _covered(S, F, orb)]
    for F in T:
        if not S.is_simplex(F):
            raise HypothesisViolated(len(sequence) + 1, S.coords(F), "a face of T(r) is not a simplex")
    R.sequence = [_key(u) for u in sequence]
    return R


def _divisors(N: int) -> list:
    return [D for D in range(1, N + 1) if N % D == 0]


def _fixed_locus(group_elems: Sequence[AffineMap], pts: Sequence) -> RationalPolytope:
    avgs = []
    for p in pts:
        s = [Fraction(0)] * len(p)
        for g in group_elems:
            s = [a + b for a, b in zip(s, g(p))]
        avgs.append(tuple(a / len(group_elems) for a in s))
    return RationalPolytope(avgs)


def _lex_fixed_point(locus: RationalPolytope, N: int, interior: bool) -> Optional[tuple]:
    for D in _divisors(N):
        pts = lattice_points(locus, D, interior=interior)
        if pts:
            return pts[0]
    return None


def invariant_triangulation(P: RationalPolytope, group: FiniteGroup, N: Optional[int] = None,
                            force: bool = False) -> PolyComplex:
    """G-invariant regular triangulation of P with vertices in (1/N)M, by iterated orbit pulls.

    N defaults to |G|. With ``force`` any N is attempted; a failing step raises HypothesisViolated.
    Ties are broken lexicographically throughout.
    """
    N = group.order if N is None else N
    if not force and N % group.order:
        raise ValueError("|G| must divide N (pass force=True to attempt anyway)")
    S = trivial_subdivision(P)
    faces = S.faces
    fixed = _fixed_locus(group.elements, P.vertices)
    u1 = _lex_fixed_point(fixed, N, interior=False)
    if u1 is None:
        raise HypothesisViolated(1, None, f"no G-fixed point of P in (1/{N})M")
    seq = [u1]
    covered = orbit_points(group, u1)
    T = [F for F in faces if not _covered(S, F, covered)]
    lat = lattice_points(P, 1)
    step = 1
    while any(not S.is_simplex(F) for F in T):
        step += 1
        nonsimplex = [F for F in T if not S.is_simplex(F)]
        u = next(x for x in lat if any(S.polytope(F).contains(x) for F in nonsimplex))
        orb = orbit_points(group, u)
        counts = [(len(_covered(S, F, orb)), F) for F in T]
        m = max(c for c, _ in counts)
        Q0 = min((F for c, F in counts if c == m), key=lambda F: S.coords(F))
        hit = _covered(S, Q0, orb)
        Q = min((F for F in faces if all(S.polytope(F).contains(p) for p in hit)), key=lambda F: (len(F), S.coords(F)))
        stab = [g for g in group.elements if S.image_cell(g, Q) == Q]
        locus = _fixed_locus(stab, hit)
        ui = _lex_fixed_point(locus, N, interior=True)
        if ui is None:
            raise HypothesisViolated(step, S.coords(Q), f"no stabilizer-fixed relative interior point in (1/{N})M")
        if not S.polytope(Q).contains_relint(ui):
            raise AssertionError("chosen point is not in the relative interior of Q")
        seq.append(ui)
        orb_i = orbit_points(group, ui)
        T = [F for F in T if not _covered(S, F, orb_i)]
    R = orbit_pull_triangulate(S, group, seq)
    R.N = N
    return R


def greedy_lattice_triangulation(P: RationalPolytope, group: FiniteGroup) -> Optional[PolyComplex]:
    """Pull by lattice-point orbits while this refines; returns the result if it is a triangulation, else None."""
    S = trivial_subdivision(P)
    lat = lattice_points(P, 1)
    while not S.is_triangulation():
        for y in lat:
            S2 = _pull_orbit(S, orbit_points(group, y))
            if set(S2.cells) != set(S.cells):
                S = S2
                break
        else:
            return None
    return S


# ---------------------------------------------------------------- translative actions

def is_translative(S: PolyComplex, group: FiniteGroup) -> tuple[bool, Optional[dict]]:
    """Every vertex orbit meets every facet at most once; otherwise a witness (u, g, facet)."""
    if not S.is_invariant(group):
        raise NotInvariant("complex is not invariant")
    for i in S.vertex_indices:
        u = S.points[i]
        for cell in S.cells:
            if i not in cell:
                continue
            for gi, g in enumerate(group.elements):
                j = S.index.get(g(u))
                if j is not None and j != i and j in cell:
                    return False, {"u": u, "g": gi, "image": S.points[j], "facet": S.coords(cell)}
    return True, None


def _vertex_pull_sequence(S: PolyComplex, group: FiniteGroup, allowed: Optional[set] = None) -> list:
    """Vertices u_1, u_2, ... chosen from non-simplex faces of T(i-1), lexicographically."""
    T = list(S.faces)
    seq = []
    while True:
        bad = [F for F in T if not S.is_simplex(F)]
        if not bad:
            return seq
        F = bad[0]
        cands = [S.points[i] for i in F if allowed is None or i in allowed]
        if not cands:
            raise PreconditionFailed(f"no admissible vertex in face {S.coords(F)}")
        u = min(cands)
        seq.append(u)
        orb = orbit_points(group, u)
        T = [H for H in T if not _covered(S, H, orb)]


def translative_refine(S: PolyComplex, group: FiniteGroup) -> PolyComplex:
    """Invariant translative triangulation with the same vertices, keeping every simplex of S."""
    ok, wit = is_translative(S, group)
    if not ok:
        raise NotTranslative(wit)
    seq = _vertex_pull_sequence(S, group)
    R = orbit_pull_triangulate(S, group, seq)
    if set(R.vertices) != set(S.vertices):
        raise AssertionError("vertex set changed")
    return R


def glue(P: RationalPolytope, Q: RationalPolytope, S_Q: PolyComplex, S_K: Optional[PolyComplex],
         group: FiniteGroup) -> PolyComplex:
    """Invariant regular lattice triangulation of P restricting to S_Q on Q and S_K on K.

    K is the subcomplex of faces of P disjoint from Q. S_Q and S_K must be invariant regular lattice
    triangulations carrying height certificates relative to the trivial subdivisions of Q and K; at
    least one must be translative.
    """
    if set(Q.vertices) == set(P.vertices):
        return S_Q
    if not all(P.contains(v) for v in Q.vertices):
        raise PreconditionFailed("Q is not contained in P")
    K_faces = faces_avoiding(P, Q)
    comps = [("Q", S_Q)] + ([("K", S_K)] if S_K is not None else [])
    trans = {}
    for name, C in comps:
        if not C.is_triangulation() or not C.is_invariant(group):
            raise PreconditionFailed(f"S_{name} is not an invariant triangulation")
        if C.heights is None:
            raise PreconditionFailed(f"S_{name} has no regularity certificate")
        if any(not el.is_integral(v) for v in C.vertices):
            raise PreconditionFailed(f"S_{name} is not a lattice complex")
        trans[name] = is_translative(C, group)[0]
    if K_faces and S_K is None:
        raise PreconditionFailed("K is nonempty but no S_K was given")
    if not any(trans.values()):
        raise PreconditionFailed("neither S_Q nor S_K is translative")
    A_Q = lattice_points(Q, 1)
    A_K = sorted({x for f in K_faces for x in lattice_points(P.face_polytope(f), 1)})
    T = trivial_subdivision(P)
    T, a_idx = T.with_points(A_Q + A_K)
    T = pulling_refinement(T, Q.vertices)
    for name, C in comps:
        for h in C.heights:
            omega = {i: Fraction(0) for i in a_idx}
            T, idx = T.with_points([C.points[i] for i in h])
            for i, v in zip(idx, h.values()):
                omega[i] = Fraction(v)
            T = regular_refinement(T, omega)
    side = "Q" if trans["Q"] else "K"
    allowed_pts = set(comps[0][1].vertices if side == "Q" else comps[1][1].vertices)
    allowed = {T.index[p] for p in allowed_pts if p in T.index}
    seq = _vertex_pull_sequence(T, group, allowed)
    R = orbit_pull_triangulate(T, group, seq)
    if not _restriction_matches(R, Q, S_Q):
        raise AssertionError("restriction to Q differs from S_Q")
    if S_K is not None and K_faces:
        for f in K_faces:
            F = P.face_polytope(f)
            if {frozenset(R.points[i] for i in c) for c in R.restrict(F)} != \
                    {frozenset(S_K.points[i] for i in c) for c in S_K.restrict(F)}:
                raise AssertionError("restriction to K differs from S_K")
    return R


def _restriction_matches(R: PolyComplex, Q: RationalPolytope, S_Q: PolyComplex) -> bool:
    a = {frozenset(R.points[i] for i in c) for c in R.restrict(Q)}
    b = {frozenset(S_Q.points[i] for i in c) for c in S_Q.cells}
    return a == b


# ---------------------------------------------------------------- obstructions

def square_obstruction(S: PolyComplex, group: FiniteGroup) -> Optional[dict]:
    """A 2-face lattice-isomorphic to [0,1]^2 with two disjoint edges whose lattice points are G-equivalent."""
    for f in S.faces:
        if len(f) != 4:
            continue
        F = S.polytope(f)
        if F.dim != 2 or not F.is_lattice():
            continue
        if len(lattice_points(F, 1)) != 4 or normalized_volume(F, full=False) != 2:
            continue
        edges = [frozenset(F.vertices[j] for j in e) for e in F.facets]
        for e1, e2 in itertools.combinations(edges, 2):
            if e1 & e2:
                continue
            g1 = _relating(group, *sorted(e1))
            g2 = _relating(group, *sorted(e2))
            if g1 is not None and g2 is not None:
                return {"face": sorted(F.vertices), "edge1": sorted(e1), "edge2": sorted(e2),
                        "g1": g1, "g2": g2}
    return None


def _relating(group: FiniteGroup, a, b) -> Optional[int]:
    for i, g in enumerate(group.elements):
        if g(a) == b:
            return i
    return None


def dim2_classify(group: FiniteGroup) -> dict:
    """Decide whether a rank-2 affine action admits invariant lattice triangulations.

    Forbidden: an element whose linear part has characteristic polynomial x^2 + 1 and whose
    fixed point is not a lattice point, or a reflection (eigenvalues 1, -1) whose fixed line
    contains no lattice point.
    """
    if group.dim != 2:
        raise ValueError("rank-2 action expected")
    for i, g in enumerate(group.elements):
        cp = charpoly(g.linear)
        fs = fixed_point(g)
        if list(cp.c) == [1, 0, 1] and fs.lattice_point is None:
            return {"triangulable": False, "offending_element": i, "type": "rotation90_half"}
        if list(cp.c) == [-1, 0, 1] and fs.lattice_point is None:
            return {"triangulable": False, "offending_element": i, "type": "reflection_half"}
    return {"triangulable": True, "offending_element": None, "type": None}


# ---------------------------------------------------------------- verification

def _barycentric_inverse(vs: Sequence) -> list:
    return el.inverse([list(v) + [Fraction(1)] for v in vs])


def _bary(inv, x) -> list:
    return el.vecmat(list(x) + [Fraction(1)], inv)


def _proper_pair(S: PolyComplex, a, b, invs) -> bool:
    common = a & b
    va, vb = sorted(a), sorted(b)
    for (s, vs, t) in ((a, va, b), (b, vb, a)):
        inv = invs[s]
        others = [S.points[i] for i in t if i not in common]
        for j, i in enumerate(vs):
            if i in common:
                continue
            if all(_bary(inv, w)[j] < 0 for w in others):
                return True
    # fallback: a ∩ b = conv(common) iff no point of a ∩ b puts weight on a vertex of a outside common
    pa, pb = [S.points[i] for i in va], [S.points[i] for i in vb]
    n = len(pa[0])
    rows = [[p[k] for p in pa] + [-q[k] for q in pb] for k in range(n)]
    rows.append([1] * len(pa) + [0] * len(pb))
    rows.append([0] * len(pa) + [1] * len(pb))
    obj = [0 if i in common else 1 for i in va] + [0] * len(vb)
    return el.lp_maximize(obj, rows, [0] * n + [1, 1]) == 0


def verify_triangulation(T: PolyComplex, P: RationalPolytope, group: Optional[FiniteGroup] = None,
                         N: Optional[int] = None, pairwise: bool = True) -> dict:
    """Check invariance, simpliciality, volume, ridge condition, vertex incidence and pairwise intersections."""
    d = P.dim
    rep = {}
    rep["invariant"] = T.is_invariant(group) if group is not None else True
    rep["simplices"] = all(len(c) == d + 1 and T.cell_dim(c) == d for c in T.cells)
    if N is not None:
        rep["lattice"] = all(el.is_integral(el.vscale(N, v)) for v in T.vertices)
    if not rep["simplices"]:
        rep["ok"] = False
        return rep
    rep["volume"] = sum(simplex_det(T.coords(c)) for c in T.cells) == normalized_volume(P)
    rep["inside"] = all(P.contains(v) for v in T.vertices)
    # ridges
    ridges = {}
    for c in T.cells:
        for i in c:
            ridges.setdefault(c - {i}, []).append((c, i))
    ridge_ok = True
    for r, owners in ridges.items():
        pts = [T.points[i] for i in r]
        boundary = any(all(el.dot(a, p) == b for p in pts) for a, b in P.ineqs)
        if boundary:
            ridge_ok &= len(owners) == 1
        elif len(owners) != 2:
            ridge_ok = False
        else:
            (c1, i1), (c2, i2) = owners
            inv = _barycentric_inverse([T.points[i] for i in sorted(c1)])
            j = sorted(c1).index(i1)
            ridge_ok &= _bary(inv, T.points[i2])[j] < 0
    rep["ridges"] = ridge_ok
    invs = {c: _barycentric_inverse([T.points[i] for i in sorted(c)]) for c in T.cells}
    stray = False
    verts = T.vertex_indices
    for c in T.cells:
        inv = invs[c]
        for i in verts:
            if i not in c and all(x >= 0 for x in _bary(inv, T.points[i])):
                stray = True
                break
    rep["vertex_incidence"] = not stray
    if pairwise:
        rep["pairwise"] = all(_proper_pair(T, a, b, invs) for a, b in itertools.combinations(T.cells, 2))
    reg = verify_regular(T)
    if reg is not None:
        rep["regular"] = reg
    rep["ok"] = all(v for k, v in rep.items() if isinstance(v, bool))
    return rep


def simplex_det(coords: Sequence) -> Fraction:
    v0 = coords[0]
    return abs(Fraction(el.det([list(el.vsub(v, v0)) for v in coords[1:]])))


def scale_complex(T: PolyComplex, N: int) -> PolyComplex:
    pts = [el.vscale(N, p) for p in T.points]
    h = [dict(x) for x in T.heights] if T.heights is not None else None
    return PolyComplex(pts, T.cells, h, T.base_cells)


def dump_json(T: PolyComplex, group: Optional[FiniteGroup] = None, N: Optional[int] = None) -> str:
    return json.dumps(T.to_json(group, N), indent=1)
