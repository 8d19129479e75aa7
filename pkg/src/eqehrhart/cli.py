"""Command-line front end.

Exit codes: 0 success, 1 verification failure or refused construction, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .checks import verify_instance
from .ehrhart_engine import equivariant_L
from .hstar import NotLatticePolytope, classify, format_series, hstar, hstar_N
from .instances import Instance, InstanceError, instance_from_json
from .polytope import NotInvariant, RationalPolytope, fixed_polytope
from .repr_ring import ClassFunction, NotVirtualCharacter, TableInvalid, decompose, format_class_function
from .triangulate import (HypothesisViolated, NotTranslative, PreconditionFailed, faces_avoiding, glue,
                          invariant_triangulation, square_obstruction, subcomplex, translative_refine,
                          trivial_subdivision, verify_triangulation)

CORPUS = Path(__file__).resolve().parent / "corpus"
log = logging.getLogger("eqehrhart")


class InputError(Exception):
    pass


def corpus_files(directory: Optional[str] = None) -> list:
    d = Path(directory) if directory else CORPUS
    return sorted(d.glob("*.json"))


def load_instance(spec: str) -> Instance:
    """A path to an instance file, or the name of a corpus instance."""
    path = Path(spec)
    if not path.exists():
        alt = CORPUS / f"{spec}.json"
        if not alt.exists():
            raise InputError(f"no such instance file or corpus entry: {spec}")
        path = alt
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return instance_from_json(data)
    except (InstanceError, TableInvalid, NotInvariant) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _truncate(args) -> Optional[int]:
    if getattr(args, "truncate", None) is not None:
        return args.truncate
    env = os.environ.get("EQEHRHART_TRUNCATE")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"EQEHRHART_TRUNCATE must be an integer, got {env!r}") from exc
    return None


def _emit(obj, as_json: bool, text: str):
    print(json.dumps(obj, indent=1, default=str) if as_json else text)


def _class_label(inst: Instance, k: int) -> str:
    g = inst.group
    r = g.reps[k]
    return f"class {k} (order {g.orders[r]}, size {len(g.classes[k])})"


# ---------------------------------------------------------------- commands

def cmd_ehrhart(args) -> int:
    inst = load_instance(args.instance)
    rows = []
    lines = []
    for m in range(args.dilates + 1):
        chi = equivariant_L(inst.polytope, inst.group, m) if m else ClassFunction.trivial(inst.group)
        vals = [str(v) for v in chi.values]
        mult = None
        if inst.table is not None:
            try:
                mult = decompose(chi, inst.table)
            except NotVirtualCharacter:
                mult = None
        rows.append({"m": m, "values": vals, "multiplicities": mult,
                     "pretty": format_class_function(chi, inst.table)})
        lines.append(f"L({m}) = {format_class_function(chi, inst.table)}    values {vals}")
    _emit({"instance": inst.name, "dilates": rows}, args.json, "\n".join(lines))
    return 0


def cmd_hstar(args) -> int:
    inst = load_instance(args.instance)
    if args.N < 1:
        raise InputError("--N must be positive")
    if args.N == 1:
        h = hstar(inst.polytope, inst.group, _truncate(args))
    else:
        h = hstar_N(inst.polytope, inst.group, args.N, _truncate(args))
    c = classify(h, inst.table)
    if args.json:
        out = h.to_json(inst.table)
        out.update({"instance": inst.name, "effective": c["effective"]})
        print(json.dumps(out, indent=1, default=str))
        return 0
    name = "h*" if args.N == 1 else f"h*_{args.N}"
    if h.is_polynomial:
        print(f"{name} = {h.format(inst.table)}")
        eff = {True: "effective", False: "not effective", None: "effectiveness unknown (no character table)"}
        print(f"polynomial; {eff[c['effective']]}")
    else:
        bad = ", ".join(_class_label(inst, k) for k in c["non_polynomial_classes"])
        print(f"{name} is not polynomial at {bad}")
        print(f"first {h.truncation} terms: {format_series(h.coefficients(), h.N, inst.table)} + ...")
    return 0


def _glue_q(inst: Instance, spec: Optional[str]) -> RationalPolytope:
    if spec:
        pts = [tuple(Fraction(x) for x in p) for p in json.loads(spec)]
        return RationalPolytope([inst.to_local(p) for p in pts])
    P, G = inst.polytope, inst.group
    Q = P
    for g in G.elements:
        Q = fixed_polytope(Q, g)
    return Q


def cmd_triangulate(args) -> int:
    inst = load_instance(args.instance)
    P, G = inst.polytope, inst.group
    N = args.N if args.N is not None else G.order
    try:
        if args.mode == "orbit-pull":
            T = invariant_triangulation(P, G, N, force=args.N is not None)
        elif args.mode == "translative":
            T = translative_refine(trivial_subdivision(P), G)
            N = 1
        else:
            Q = _glue_q(inst, args.q)
            if not Q.is_lattice():
                raise PreconditionFailed("Q is not a lattice polytope (pass --q)")
            S_Q = trivial_subdivision(Q)
            if not S_Q.is_triangulation():
                S_Q = translative_refine(S_Q, G)
            K = faces_avoiding(P, Q)
            S_K = subcomplex(P, K) if K else None
            if S_K is not None and not S_K.is_triangulation():
                S_K = translative_refine(S_K, G)
            T = glue(P, Q, S_Q, S_K, G)
            N = 1
    except (HypothesisViolated, NotTranslative, PreconditionFailed) as exc:
        wit = square_obstruction(trivial_subdivision(P), G) if P.is_lattice() else None
        out = {"instance": inst.name, "ok": False, "error": type(exc).__name__, "message": str(exc),
               "square_obstruction": _jsonable(wit)}
        text = f"refused: {exc}"
        if wit:
            text += f"\nsquare obstruction on face {_fmt_pts(wit['face'])}: edges {_fmt_pts(wit['edge1'])} " \
                    f"and {_fmt_pts(wit['edge2'])} each lie in one orbit"
        _emit(out, args.json, text)
        return 1
    rep = verify_triangulation(T, P, G, N, pairwise=not args.no_pairwise)
    data = T.to_json(G, N)
    data["certificate"] = {k: v for k, v in rep.items()}
    if getattr(T, "sequence", None):
        data["sequence"] = [[str(x) for x in u] for u in T.sequence]
    if args.output:
        Path(args.output).write_text(T.to_off() if args.format == "off" else json.dumps(data, indent=1))
    if args.json:
        print(json.dumps(data, indent=1, default=str))
    else:
        print(f"{len(T.cells)} simplices on {len(T.vertex_indices)} vertices in (1/{N})M")
        print("certificate: " + ", ".join(f"{k}={v}" for k, v in rep.items()))
        if args.format == "off" and not args.output:
            print(T.to_off(), end="")
    return 0 if rep["ok"] else 1


def cmd_verify(args) -> int:
    if args.corpus is not None:
        files = corpus_files(args.corpus or None)
        if args.kind:
            files = [f for f in files if json.loads(f.read_text()).get("kind") == args.kind]
        insts = [load_instance(str(f)) for f in files]
    elif args.instance:
        insts = [load_instance(args.instance)]
    else:
        raise InputError("give an instance or --corpus")
    ledgers = []
    for inst in insts:
        led = verify_instance(inst, max_N=args.max_N, m_max=args.dilates, pairwise=not args.no_pairwise)
        ledgers.append(led)
        if not args.json:
            for c in led.checks:
                print(f"{'PASS' if c.ok else 'FAIL'}  {inst.name:28s} {c.name:40s} {c.detail}")
    ok = all(l.ok for l in ledgers)
    if args.json:
        print(json.dumps({"ok": ok, "instances": [l.to_json() for l in ledgers]}, indent=1, default=str))
    else:
        print(f"{sum(len(l.checks) for l in ledgers)} checks on {len(ledgers)} instances: {'all pass' if ok else 'FAILURES'}")
    return 0 if ok else 1


def _fmt_pts(pts) -> str:
    return "[" + ", ".join("(" + ",".join(str(x) for x in p) + ")" for p in pts) + "]"


def _jsonable(x):
    if x is None:
        return None
    return json.loads(json.dumps(x, default=str))


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqehrhart", description="Exact equivariant Ehrhart theory.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("ehrhart", help="permutation characters L(P,rho;m)")
    e.add_argument("instance")
    e.add_argument("--dilates", type=int, default=3)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_ehrhart)

    h = sub.add_parser("hstar", help="equivariant h*-series (h*_N with --N)")
    h.add_argument("instance")
    h.add_argument("--N", type=int, default=1)
    h.add_argument("--truncate", type=int)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hstar)

    t = sub.add_parser("triangulate", help="invariant regular triangulation with certificate")
    t.add_argument("instance")
    t.add_argument("--N", type=int)
    t.add_argument("--mode", choices=["orbit-pull", "translative", "glue"], default="orbit-pull")
    t.add_argument("--q", help="glue mode: JSON list of points spanning Q (default: the fixed polytope)")
    t.add_argument("--output")
    t.add_argument("--format", choices=["json", "off"], default="json")
    t.add_argument("--no-pairwise", action="store_true", help="skip the pairwise intersection check")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_triangulate)

    v = sub.add_parser("verify", help="run every implemented identity on an instance or the corpus")
    v.add_argument("instance", nargs="?")
    v.add_argument("--corpus", nargs="?", const="", default=None, help="directory (default: bundled corpus)")
    v.add_argument("--kind", choices=["example", "dim2"])
    v.add_argument("--max-N", type=int, default=2)
    v.add_argument("--dilates", type=int, default=4)
    v.add_argument("--no-pairwise", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotInvariant, NotLatticePolytope, InstanceError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
