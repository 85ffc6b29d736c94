"""Verifier suites behind ``verify <suite>``; each returns a Report.

A suite bundles the identity checks of one module at a fixed window.  Parts
marked ``expect: fail`` are fault injections: the suite passes only when the
corrupted input is rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import product
from pathlib import Path

from .classical import (DOMAIN_T1, Report, RMatrixInput, cocycle_defect, cojacobi_defect, gamma, lift_rho,
                        validate_gcybe)
from .core import FIXTURES, G, GSTAR, ONE, LieAlgebra, _mat_inverse, add_into, kappa_d, verify_structure
from .duality import dumps
from .pbw import loop_enveloping, naive_normal_order
from .yangian import BOREL_SPEC, borel_summary, build_matched_pair, quantize, verify_hopf, verify_quantization

SUITES = ("structure", "pbw", "classical", "quantization", "hopf", "borel", "twist", "vertex",
          "rs", "r", "modules")


def _bundle(name: str, window: dict, parts: list) -> Report:
    failed = []
    for p in parts:
        expect = p.get("expect", "pass")
        got = "pass" if p["status"].startswith("pass") else "fail"
        p["outcome"] = "as expected" if got == expect else "unexpected"
        if got != expect:
            failed.append({"identity": p["identity"], "expected": expect, "got": got})
    return Report(name, window, "see parts", failed, parts=parts)


def _expect_fail(rep) -> dict:
    rep = dict(rep)
    rep["expect"] = "fail"
    return rep


def _plain(identity: str, window, domain: str, wit: list) -> Report:
    return Report(identity, window, domain, wit)


# --- 1, 2: core and pbw --------------------------------------------------------------

def suite_structure(lie: LieAlgebra, samples: int = 10000, seed: int = 0) -> Report:
    return _bundle("structure", {"samples": samples}, [verify_structure(lie, samples, seed)])


def pbw_letters(lie: LieAlgebra, degrees=(-1, 0)) -> list:
    return [(n, a, G) for n in degrees for a in range(lie.dim)]


def suite_pbw(lie: LieAlgebra, length: int = 5, degrees=(-1, 0)) -> Report:
    """normal_order against adjacent-swap reduction on every word over the window letters."""
    env = loop_enveloping(lie)
    letters = pbw_letters(lie, degrees)
    br = env.bracket
    wit, idem = [], []
    count = 0
    for k in range(length + 1):
        for w in product(letters, repeat=k):
            count += 1
            fast = env.normal_order(w)
            if fast != naive_normal_order(br, w):
                wit.append({"word": [list(x) for x in w]})
            again: dict = {}
            for m, c in fast.items():
                for m2, c2 in env.normal_order(m).items():
                    add_into(again, m2, c * c2)
            if {m: c for m, c in again.items() if c} != fast:
                idem.append({"word": [list(x) for x in w]})
    window = {"letters": len(letters), "loop degrees": list(degrees), "length": length, "words": count}
    return _bundle("pbw", window, [
        _plain("normal_order = adjacent-swap reduction", window, "U(g((t)))", wit),
        _plain("normal_order is idempotent", window, "U(g((t)))", idem)])


# --- 3, 4, 5, 6: classical and quantization --------------------------------------------

def casimir_oracle(lie: LieAlgebra) -> dict:
    """C_d from the inverse Gram matrix of kappa_d on g (x) eps g."""
    gram = [[kappa_d(lie, {(0, a, G): ONE}, {(0, b, GSTAR): ONE}, residue=False) for b in range(lie.dim)]
            for a in range(lie.dim)]
    inv = _mat_inverse(gram)
    out: dict = {}
    for a in range(lie.dim):
        for b in range(lie.dim):
            if inv[a][b]:
                add_into(out, ((0, a, G), (0, b, GSTAR)), inv[a][b])
                add_into(out, ((0, b, GSTAR), (0, a, G)), inv[a][b])
    return out


def lift_gamma_defect(lie: LieAlgebra, order: int = 4) -> dict:
    """lift_rho(gamma) against sum_k C_d t1^{-k-1} t2^k."""
    ref: dict = {}
    for k in range(order + 1):
        for (s1, s2), v in casimir_oracle(lie).items():
            add_into(ref, ((), ((s1[0] - k - 1, s1[1], s1[2]), (s2[0] + k, s2[1], s2[2]))), v)
    got = lift_rho(gamma(lie)).expand(DOMAIN_T1, order)
    d = dict(got)
    for key, v in ref.items():
        add_into(d, key, -v)
    return {k: v for k, v in d.items() if v}


def loop_generators(lie: LieAlgebra, loop: int) -> list:
    return [{(n, a, s): ONE} for n in range(loop + 1) for a in range(lie.dim) for s in (G, GSTAR)]


def suite_classical(lie: LieAlgebra, r: RMatrixInput | None = None, order: int = 4, loop: int = 3) -> Report:
    r = r or gamma(lie)
    rho = lift_rho(r)
    gens = loop_generators(lie, loop)
    coc = [[list(next(iter(x))), list(next(iter(y)))] for x in gens for y in gens if cocycle_defect(rho, x, y)]
    coj = [list(next(iter(x))) for x in gens if cojacobi_defect(rho, x)]
    parts = [validate_gcybe(r, order)]
    if r.is_gamma():
        lift = lift_gamma_defect(lie, order)
        parts.append(_plain("lift_rho(gamma) = C_d/(t1 - t2)", {"order": order}, "|t1|>|t2|",
                            [{"term": repr(k)} for k in sorted(lift)][:20]))
    window = {"loop": loop, "generators": len(gens)}
    parts.append(_plain("delta is a 1-cocycle", window, "formal", [{"pair": p} for p in coc]))
    parts.append(_plain("co-Jacobi", window, "formal", [{"generator": g} for g in coj]))
    return _bundle("classical", {"order": order, "loop": loop}, parts)


def suite_quantization(lie: LieAlgebra, r: RMatrixInput | None = None, K: int = 2, N: int = 3) -> Report:
    q = quantize(r or gamma(lie), K=K)
    return _bundle("quantization", {"K": K, "N": N}, [verify_quantization(q, N=N)])


def suite_hopf(lie: LieAlgebra, r: RMatrixInput | None = None, K: int = 3, N: int = 3) -> Report:
    q = quantize(r or gamma(lie), K=K)
    return _bundle("hopf", {"K": K, "N": N}, [verify_hopf(q, N=N)])


BOREL_GOLDEN = FIXTURES / "borel_golden.json"

# The structure constants stated for the sl2 Borel matched pair, as TypedTensor rows.
BOREL_EXPECTED = {
    ("brackets", "E", "F^v"): [{"hbar": [[1, 1, 1]], "legs": [["F^v", "F^v"]]}],
    ("coproduct", "E"): [{"hbar": [[0, 1, 1]], "legs": [["E"], []]}, {"hbar": [[0, 1, 1]], "legs": [[], ["E"]]},
                         {"hbar": [[1, 1, 1]], "legs": [["F^v"], ["H"]]}],
    ("coproduct", "H"): [{"hbar": [[0, 1, 1]], "legs": [["H"], []]}, {"hbar": [[0, 1, 1]], "legs": [[], ["H"]]}],
    ("coproduct", "F^v"): [{"hbar": [[0, 1, 1]], "legs": [["F^v"], []]},
                           {"hbar": [[0, 1, 1]], "legs": [[], ["F^v"]]}],
}


def borel_text() -> str:
    return dumps(borel_summary(build_matched_pair(BOREL_SPEC))) + "\n"


def suite_borel(golden: Path = BOREL_GOLDEN) -> Report:
    summary = borel_summary(build_matched_pair(BOREL_SPEC))
    text = dumps(summary) + "\n"
    wit = []
    for key, rows in BOREL_EXPECTED.items():
        if key[0] == "brackets":
            got = next(b["value"] for b in summary["brackets"] if (b["x"], b["f"]) == key[1:])
        else:
            got = next(c["value"] for c in summary["coproduct"] if c["gen"] == key[1])
        if sorted(map(dumps, got)) != sorted(map(dumps, rows)):
            wit.append({"entry": list(key), "got": got})
    gold = golden.read_text()
    return _bundle("borel", {"K": BOREL_SPEC["K"]}, [
        _plain("stated Borel structure constants", {}, "finite", wit),
        _plain("byte-exact against golden file", {"file": golden.name}, "finite",
               [] if text == gold else [{"bytes": [len(text), len(gold)]}])])


# --- 7, 8: twist and vertex ---------------------------------------------------------------

def r_fixture(lie: LieAlgebra, path: Path | str | None = None) -> RMatrixInput:
    return RMatrixInput.from_json(lie, path or FIXTURES / "r_ee.json")


def suite_twist(lie: LieAlgebra, r1: RMatrixInput | None = None, r2: RMatrixInput | None = None,
                K: int = 2, N: int = 2) -> Report:
    from .twist import verify_twist

    r1 = r1 or gamma(lie)
    r2 = r2 or r_fixture(lie)

    def bump(F):
        F = F.copy()
        k = min(k for k in F.terms if k[1] == 1)
        F.terms[k] += 1
        return F

    return _bundle("twist", {"K": K, "N": N}, [
        verify_twist(r1, r2, K, N),
        _expect_fail(verify_twist(r1, r2, K, 1, corrupt=bump))])


def suite_vertex(lie: LieAlgebra, depth: int = 3, K: int = 2, W: int = 4) -> Report:
    from .vertex import MeromorphicCoproduct, VacuumModule, verify_delta_z_hom, verify_vertex_axioms

    V = VacuumModule(lie, K=K)
    q = V.q
    pairs = [(x, f) for x in q.plus_symbols(1) for f in q.s_symbols(1)]
    pairs += [(f, g) for f in q.s_symbols(1) for g in q.s_symbols(1) if f < g]
    return _bundle("vertex", {"depth": depth, "K": K, "weight": W}, [
        verify_vertex_axioms(lie, depth=depth, zmax=depth, Emax=1, V=V),
        verify_delta_z_hom(MeromorphicCoproduct(V, W=W + 2), pairs, W)])


# --- 9, 10, 11: spectral R-matrices and modules -----------------------------------------------

def suite_rs(lie: LieAlgebra, K: int = 2, zdepth: int = 4, loop: int = 2, W: int = 2) -> Report:
    from .rmat import (RMatrices, uniqueness_perturbation, verify_aux_lemma, verify_cocycle, verify_hz_lemma,
                       verify_intertwining)

    M = RMatrices(lie, K, 4)
    gens = M.q.generators(loop)
    return _bundle("rs", {"K": K, "zdepth": zdepth, "loop": loop, "cocycle weight": W}, [
        verify_intertwining(M, gens, zdepth),
        verify_aux_lemma(M),
        verify_hz_lemma(M),
        verify_cocycle(M, W),
        _expect_fail(verify_intertwining(M, gens, zdepth, perturb=uniqueness_perturbation(lie, K)))])


def suite_r(lie: LieAlgebra, K: int = 2, W: int = 4) -> Report:
    from .rmat import (RMatrices, semiclassical_defect, verify_coproduct_R, verify_coproduct_R_right,
                       verify_op_intertwining, verify_qybe, verify_translation)

    M = RMatrices(lie, K, W)
    semi = semiclassical_defect(M)
    parts = [
        verify_qybe(M, W),
        _plain("hbar^1 part of R = -rho_gamma(z + t1 - t2)", {"weight": M.W}, "z=inf",
               [{"defect": M.q.tensor_json(semi)[:5]}] if semi else []),
        verify_translation(M, which="R"),
        verify_translation(M, which="R_s"),
        verify_coproduct_R(M),
        verify_coproduct_R_right(M),
        verify_op_intertwining(M, M.q.generators(1)),
        _expect_fail(verify_qybe(RMatrices(lie, K, W, M.q, corrupt=True), W)),
    ]
    return _bundle("r", {"K": K, "weight": W}, parts)


def suite_modules(lie: LieAlgebra, L: int = 1, m: int = 2, xi=1, K: int = 3) -> Report:
    from .repmod import build_coregular, evaluate_R, trivial_module, verify_module_relations, verify_qybe_on_modules
    from .rmat import RMatrices

    Mod, closure = build_coregular(L, m, xi, lie=lie, K=K)
    T = trivial_module(Mod.q)
    T.xi = Mod.xi
    RM = RMatrices(lie, K, 2, Mod.q)
    _, fin = evaluate_R(RM, Mod, Mod)
    parts = [closure, verify_module_relations(Mod), fin]
    for mix in ((T, Mod, Mod), (Mod, Mod, T), (Mod, Mod, Mod)):
        parts.append(verify_qybe_on_modules(RM, *mix))
    return _bundle("modules", {"L": L, "m": m, "xi": str(Fraction(xi)), "K": K}, parts)


def run_suite(name: str, lie: LieAlgebra, opts: dict | None = None) -> Report:
    """Dispatch by name; ``opts`` holds the CLI window overrides that apply."""
    o = {k: v for k, v in (opts or {}).items() if v is not None}
    r = o.get("r")
    if name == "structure":
        return suite_structure(lie, o.get("samples", 10000))
    if name == "pbw":
        return suite_pbw(lie)
    if name == "classical":
        return suite_classical(lie, r, loop=o.get("N", 3))
    if name == "quantization":
        return suite_quantization(lie, r, o.get("K", 2), o.get("N", 3))
    if name == "hopf":
        return suite_hopf(lie, r, o.get("K", 3), o.get("N", 3))
    if name == "borel":
        return suite_borel()
    if name == "twist":
        return suite_twist(lie, r, o.get("r2"), o.get("K", 2), o.get("N", 2))
    if name == "vertex":
        return suite_vertex(lie, K=o.get("K", 2), W=o.get("M", 4))
    if name == "rs":
        return suite_rs(lie, o.get("K", 2), o.get("zdepth", 4))
    if name == "r":
        return suite_r(lie, o.get("K", 2), o.get("M", 4))
    if name == "modules":
        return suite_modules(lie, o.get("L", 1), o.get("m", 2), o.get("xi", 1), o.get("K", 3))
    raise KeyError(name)


def report_text(rep) -> str:
    return json.dumps(rep, sort_keys=True, indent=1, default=str) + "\n"
