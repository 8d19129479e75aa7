"""Write the regression corpus (instance files plus certified triangulations) into the package."""

import json
import sys
from pathlib import Path

from eqehrhart import fixtures
from eqehrhart.instances import dim2_catalog, instance_to_json, standard_corpus
from eqehrhart.polytope import RationalPolytope
from eqehrhart.triangulate import faces_avoiding, glue, invariant_triangulation, subcomplex, trivial_subdivision

OUT = Path(__file__).resolve().parent.parent / "src" / "eqehrhart" / "corpus"

DESCRIPTIONS = {
    "square_swap": "[0,1]^2 with the coordinate swap; h* = 1 + t",
    "klein_cube": "[-1,1]^3 in the all-odd affine lattice, Klein four-group; no invariant lattice triangulation",
    "p5_reflexive": "hull of e_i, e_i + e_{i+1} in Z^5/Z(1,..,1) with the cyclic shift; non-regular invariant triangulation",
    "z3_prism_quotient": "triangle x segment in Z^3/Z(1,1,1) + Z with Z/3; effective h* but no invariant lattice triangulation",
    "circuit_111": "circuit polytope, a = (1,1,1), block swap; trivial character absent from h*_1",
    "circuit_112": "circuit polytope, a = (1,1,2); h* not polynomial",
    "circuit_111_4cycle": "circuit polytope, a = (1,1,1), a 4-cycle on the first two blocks",
    "sym_prism_3": "simplex x segment with Sym_3 permuting the simplex",
    "z3_prism": "simplex x segment with the 3-cycle",
    "sym_prism_4": "simplex x segment with Sym_4",
    "permutahedron_2": "hexagon permutahedron with Sym_3",
    "permutahedron_3": "3-dimensional permutahedron with Sym_4; h*_2 polynomial",
    "cross_polytope_2d": "Conv(+-e1, +-e2) with the central symmetry",
    "bipyramid": "bipyramid over an invariant unit square with a reflection",
}


def tri_json(T, N):
    d = T.to_json(N=N)
    d.pop("heights", None)
    return d


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.json"):
        old.unlink()
    for inst in standard_corpus():
        extra = {"description": DESCRIPTIONS.get(inst.name, inst.name), "kind": "example"}
        tris = {}
        if inst.name == "p5_reflexive":
            tris["nonregular_fixture"] = tri_json(fixtures.p5_triangulation(inst), 1)
        if inst.name == "bipyramid":
            tris["S1"] = tri_json(fixtures.bipyramid_s1(inst), 1)
        if inst.name == "permutahedron_3":
            tris["barycentric"] = tri_json(fixtures.barycentric_triangulation(inst), 2)
        if inst.name == "z3_prism_quotient":
            tris["orbit_pull_N3"] = tri_json(invariant_triangulation(inst.polytope, inst.group, 3), 3)
        if inst.name == "klein_cube":
            tris["orbit_pull_N4"] = tri_json(invariant_triangulation(inst.polytope, inst.group, 4), 4)
        if inst.name == "cross_polytope_2d":
            P, G = inst.polytope, inst.group
            Q = RationalPolytope([inst.to_local((1, 0)), inst.to_local((-1, 0))])
            T = glue(P, Q, trivial_subdivision(Q), subcomplex(P, faces_avoiding(P, Q)), G)
            tris["glued"] = tri_json(T, 1)
            extra["monotonicity"] = {"Q": [[str(x) for x in v] for v in Q.vertices], "triangulation": "glued"}
        if tris:
            extra["triangulations"] = tris
        (OUT / f"{inst.name}.json").write_text(json.dumps(instance_to_json(inst, extra), indent=1) + "\n")
    for inst in dim2_catalog():
        extra = {"description": "rank-2 catalog entry", "kind": "dim2"}
        (OUT / f"dim2_{inst.name}.json").write_text(json.dumps(instance_to_json(inst, extra), indent=1) + "\n")
    print(f"wrote {len(list(OUT.glob('*.json')))} instance files to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
