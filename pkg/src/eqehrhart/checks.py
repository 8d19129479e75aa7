"""Per-instance verification ledger: every implemented identity, reported as pass/fail rows."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .ehrhart_engine import check_invariant, equivariant_ehr
from .hstar import (CheckFailed, classify, det_identity_check, hstar, hstar_N, low_coefficient_identity,
                    monotonicity_check, n_reciprocity_holds, psi_ceil, psi_int, pyramid, reciprocity_check,
                    scale_action)
from .instances import Instance
from .polytope import RationalPolytope, lattice_points
from .repr_ring import ClassFunction, perm_character
from .sr_formula import hstar_via_triangulation, volume_check
from .triangulate import PolyComplex, verify_triangulation


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Ledger:
    instance: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def run(self, name: str, fn: Callable[[], object]):
        t = time.perf_counter()
        try:
            res = fn()
            ok, detail = (res if isinstance(res, tuple) else (bool(res), ""))
        except CheckFailed as exc:
            ok, detail = False, str(exc)
        self.checks.append(Check(name, ok, str(detail), time.perf_counter() - t))

    def to_json(self) -> dict:
        return {"instance": self.instance, "ok": self.ok,
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail, "seconds": round(c.seconds, 3)}
                           for c in self.checks]}


def oracle_agreement(P: RationalPolytope, group, m_max: int) -> tuple:
    """Series coefficients of Ehr(P,ρ;t) versus fixed-point counts on P ∩ (1/m)M."""
    ser = equivariant_ehr(P, group)
    coeffs = ser.coefficients(m_max + 1)
    for m in range(m_max + 1):
        brute = perm_character(group, lattice_points(P, m)) if m else ClassFunction.trivial(group)
        if coeffs[m] != brute:
            return False, f"m={m}: {coeffs[m]} vs {brute}"
    return True, f"m=0..{m_max}"


def stored_triangulations(inst: Instance) -> dict:
    out = {}
    for name, data in inst.extra.get("triangulations", {}).items():
        T = PolyComplex.from_json(data)
        T.N = int(data.get("N", T.denominator))
        out[name] = T
    return out


def verify_instance(inst: Instance, max_N: int = 2, m_max: int = 4, pairwise: bool = True,
                    triangulations: Optional[dict] = None) -> Ledger:
    P, G = inst.polytope, inst.group
    led = Ledger(inst.name)
    led.run("invariant", lambda: (check_invariant(P, G), True)[1])
    led.run("det identity", lambda: all(det_identity_check(g) for g in G.elements))
    led.run("oracle agreement", lambda: oracle_agreement(P, G, m_max))
    lattice = P.is_lattice()
    h = hstar(P, G) if lattice else None
    for N in range(1, max_N + 1):
        hN = hstar_N(P, G, N)
        led.run(f"N-reciprocity N={N}", lambda hN=hN, N=N: all(n_reciprocity_holds(P, G, N, hN)))
        led.run(f"low coefficients N={N}", lambda hN=hN, N=N: low_coefficient_identity(P, G, N, hN))
        if N > 1:
            led.run(f"Psi_Int N={N}", lambda hN=hN, N=N: psi_int(hN) == hstar_N(*scale_action(P, G, N)))
            if P.dim <= 3:
                led.run(f"Psi_Ceil N={N}", lambda hN=hN, N=N: psi_ceil(hN) == hstar_N(*scale_action(*pyramid(P, G), N)))
    if lattice and h.is_polynomial:
        led.run("reciprocity", lambda: (True, str(reciprocity_check(P, G, h)["degree"])))
    if lattice:
        c = classify(h, inst.table)
        led.checks.append(Check("classify", True, f"polynomial={c['polynomial']} effective={c['effective']}"))
    tris = stored_triangulations(inst) if triangulations is None else triangulations
    for name, T in tris.items():
        N = getattr(T, "N", None) or T.denominator
        led.run(f"triangulation {name}", lambda T=T, N=N: _tri_ok(T, P, G, N, pairwise))
        ref = psi_int(hstar_N(P, G, N)) if N > 1 else h
        led.run(f"SR cross-check {name}", lambda T=T, N=N, ref=ref: _sr_ok(P, G, T, N, ref))
        if N == 1:
            led.run(f"triangulation implies effective {name}",
                    lambda: h.is_polynomial and (inst.table is None or classify(h, inst.table)["effective"]))
    mono = inst.extra.get("monotonicity")
    if mono:
        Q = RationalPolytope([tuple(Fraction(x) for x in p) for p in mono["Q"]])
        T = tris.get(mono.get("triangulation", ""), None)
        led.run("monotonicity", lambda: monotonicity_check(P, Q, G, inst.table, T)["holds"])
    return led


def _tri_ok(T, P, G, N, pairwise) -> tuple:
    rep = verify_triangulation(T, P, G, N, pairwise=pairwise)
    bad = [k for k, v in rep.items() if v is False]
    return rep["ok"], ("all invariants hold" if not bad else "failed: " + ", ".join(bad))


def _sr_ok(P, G, T, N, ref) -> bool:
    hs = hstar_via_triangulation(P, G, T, N)
    return hs == ref and volume_check(P, hs)
