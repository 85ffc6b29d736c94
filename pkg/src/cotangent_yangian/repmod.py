"""Finite-dimensional smooth modules at hbar = xi and evaluation of tensor series.

The coregular module is the vacuum module A (x)_{U(g[t])} C = S(g*[t]): an
S-generator acts by multiplication, a g[t]-generator x by x . (s 1) =
[x, s] 1, read off from the straightening x s = s x + sum hbar^h s' u' with
u' acting by the counit.  Its quotient by the ideal of modes >= L and
symmetric degree >= m is finite-dimensional.

The epsilon-grading (deg g* = 2, deg hbar = -2) makes the hbar^h part of
[x, s] have symmetric degree deg(s) + h, so the degree filtration is
preserved, the action at hbar = xi only needs hbar^{<= m-1}, and a series of
epsilon-degree 0 only needs hbar^{<= total S-degree on the legs}.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .classical import Report, RMatrixInput, gamma
from .core import G, GSTAR, ONE, ZERO, LieAlgebra, add_into, bracket_symbols
from .duality import _multisets
from .errors import ClosureFailure, LegActionUndefined, WindowTooSmall
from .pbw import Tensor, merge_sorted
from .yangian import Quantization, quantize

Matrix = dict  # {(row, col): Fraction}


# --- sparse matrices ------------------------------------------------------------

def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows: dict = {}
    for (k, j), v in B.items():
        rows.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), u in A.items():
        for j, v in rows.get(k, ()):
            add_into(out, (i, j), u * v)
    return out


def mat_add(A: Matrix, B: Matrix, c=ONE) -> Matrix:
    out = dict(A)
    for k, v in B.items():
        add_into(out, k, v * c)
    return out


def identity(n: int) -> Matrix:
    return {(i, i): ONE for i in range(n)}


def kron(A: Matrix, B: Matrix, nb: int) -> Matrix:
    out: dict = {}
    for (i, j), u in A.items():
        for (k, l), v in B.items():
            out[(i * nb + k, j * nb + l)] = u * v
    return out


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return mat_add(mat_mul(A, B), mat_mul(B, A), -1)


def dense(A: Matrix, n: int, m: int | None = None) -> list:
    m = n if m is None else m
    return [[A.get((i, j), ZERO) for j in range(m)] for i in range(n)]


# --- modules -------------------------------------------------------------------------

class SmoothModule:
    """A quotient S(g*[t]/t^L)_{deg < m} of the coregular module, or the trivial module (m = 1)."""

    def __init__(self, q: Quantization, L: int, m: int, xi=1, label: str | None = None):
        if L < 1 or m < 1:
            raise ValueError("L and m must be >= 1")
        self.q, self.L, self.m, self.xi = q, L, m, Fraction(xi)
        self.lie = q.split.lie
        if q.K < m - 1:
            raise WindowTooSmall("the action at hbar = xi needs hbar^{m-1}", (q.K, m - 1))
        syms = [(n, a, GSTAR) for n in range(L) for a in range(self.lie.dim)]
        self.basis = sorted(_multisets(syms, m - 1), key=lambda s: (len(s), s))
        self.index = {s: i for i, s in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.label = label or ("trivial" if m == 1 else f"coregular(L={L}, m={m})")
        self.max_weight = (m - 1) * L
        self._gen: dict = {}
        self._leg: dict = {}

    def _project(self, s: tuple) -> int | None:
        return self.index.get(s) if len(s) < self.m and all(f[0] < self.L for f in s) else None

    def act_free(self, x, s: tuple) -> dict:
        """x . s in the full coregular module, as {(hbar power, monomial): c}."""
        if x[2] == GSTAR:
            return {(0, merge_sorted(s, (x,))): ONE}
        if x[0] < 0:
            raise LegActionUndefined("negative modes do not act on a smooth module", x)
        out: dict = {}
        for (h, s2, u2), c in self.q.A.move((x,), s).items():
            if not u2:
                add_into(out, (h, s2), c)
        return out

    def gen_matrix(self, x) -> Matrix:
        hit = self._gen.get(x)
        if hit is not None:
            return hit
        mat: dict = {}
        for j, s in enumerate(self.basis):
            for (h, s2), c in self.act_free(x, s).items():
                i = self._project(s2)
                if i is not None:
                    add_into(mat, (i, j), c * self.xi ** h)
        self._gen[x] = mat
        return mat

    def leg_matrix(self, leg) -> Matrix:
        """The operator of s_1...s_k u_1...u_l."""
        hit = self._leg.get(leg)
        if hit is not None:
            return hit
        s, u = leg
        cur = identity(self.dim)
        for x in s + u:
            if not cur:
                break
            cur = mat_mul(cur, self.gen_matrix(x))
        self._leg[leg] = cur
        return cur

    def to_json(self) -> dict:
        from .duality import sym_to_json
        acts = {}
        for x in self.generators():
            M = self.gen_matrix(x)
            if M:
                acts[" ".join(map(str, sym_to_json(x)))] = [[[c.numerator, c.denominator] for c in row]
                                                             for row in dense(M, self.dim)]
        return {"label": self.label, "xi": [self.xi.numerator, self.xi.denominator],
                "basis": [[sym_to_json(f) for f in s] for s in self.basis], "actions": acts}

    def generators(self, top: int | None = None) -> list:
        top = self.L if top is None else top
        return [(n, a, sec) for sec in (G, GSTAR) for n in range(top) for a in range(self.lie.dim)]


def closure_report(Mod: SmoothModule, extra_modes: int = 1) -> Report:
    """Is the ideal (modes >= L) + (degree >= m) stable under the generators?

    Checked on its boundary: monomials of degree m with modes < L and
    monomials of degree < m with one mode in [L, L + extra_modes].
    """
    lie = Mod.lie
    low = [(n, a, GSTAR) for n in range(Mod.L) for a in range(lie.dim)]
    boundary = [s for s in _multisets(low, Mod.m, min_deg=Mod.m)]
    for n in range(Mod.L, Mod.L + extra_modes + 1):
        for a in range(lie.dim):
            for s in _multisets(low, Mod.m - 2) if Mod.m >= 2 else [()]:
                boundary.append(merge_sorted(s, ((n, a, GSTAR),)))
    top = Mod.max_weight + 1
    gens = [(n, a, G) for n in range(top + 1) for a in range(lie.dim)]
    wit = []
    for x in gens:
        for s in boundary:
            for (h, s2), c in Mod.act_free(x, s).items():
                if Mod._project(s2) is not None:
                    wit.append({"generator": list(x), "monomial": [list(f) for f in s], "image": [list(f) for f in s2]})
    # modes >= L acting as zero
    nonzero = [list(x) for x in gens if x[0] >= Mod.L and Mod.gen_matrix(x)]
    return Report("quotient ideal is action-stable", {"L": Mod.L, "m": Mod.m, "extra modes": extra_modes},
                  "coregular quotient", wit, checks={"boundary": len(boundary), "generators": len(gens)},
                  high_modes_nonzero=nonzero)


def build_coregular(L: int, m: int, xi=1, rho: RMatrixInput | None = None, lie: LieAlgebra | None = None,
                    K: int | None = None, max_m: int | None = None):
    """Build the quotient module and certify closure; enlarge m up to ``max_m`` if needed."""
    if rho is None:
        rho = gamma(lie)
    top = m if max_m is None else max_m
    for mm in range(m, top + 1):
        q = quantize(rho, K=max(mm - 1, K or 0, 1))
        Mod = SmoothModule(q, L, mm, xi)
        rep = closure_report(Mod)
        if rep.ok:
            rep["enlarged"] = mm != m
            return Mod, rep
    raise ClosureFailure("no action-stable truncation within the search bounds", rep["witnesses"][:3])


def trivial_module(q: Quantization) -> SmoothModule:
    return SmoothModule(q, 1, 1, 1, "trivial")


# --- relations -------------------------------------------------------------------------

def _s_poly_matrix(Mod: SmoothModule, poly: Mapping) -> Matrix:
    out: dict = {}
    for (h, s), c in poly.items():
        out = mat_add(out, Mod.leg_matrix((s, ())), c * Mod.xi ** h)
    return out


def verify_module_relations(Mod: SmoothModule, top: int | None = None) -> Report:
    """[S, S] = 0, [x, y] = [x, y]_{g[t]} and [x, f] = sum xi^h (...) as matrices."""
    gens = Mod.generators(top)
    us = [g for g in gens if g[2] == G]
    ss = [g for g in gens if g[2] == GSTAR]
    wit = []
    n = 0
    for i, a in enumerate(ss):
        for b in ss[i + 1:]:
            n += 1
            if commutator(Mod.gen_matrix(a), Mod.gen_matrix(b)):
                wit.append({"relation": "[f, f']", "pair": [list(a), list(b)]})
    for i, x in enumerate(us):
        for y in us[i + 1:]:
            n += 1
            rhs: dict = {}
            for z, c in bracket_symbols(Mod.lie, x, y).items():
                rhs = mat_add(rhs, Mod.gen_matrix(z), c)
            if mat_add(commutator(Mod.gen_matrix(x), Mod.gen_matrix(y)), rhs, -1):
                wit.append({"relation": "[x, y]", "pair": [list(x), list(y)]})
        for f in ss:
            n += 1
            rhs = _s_poly_matrix(Mod, Mod.q.commutator_dict(x, f))
            if mat_add(commutator(Mod.gen_matrix(x), Mod.gen_matrix(f)), rhs, -1):
                wit.append({"relation": "[x, f]", "pair": [list(x), list(f)]})
    return Report("defining relations as matrices", {"module": Mod.label, "xi": str(Mod.xi)}, "exact", wit,
                  checks={"relations": n})


# --- evaluation ------------------------------------------------------------------------

def evaluate(ts: Tensor, *mods: SmoothModule) -> dict:
    """{z-exponent: matrix} for a tensor series acting on mods[0] (x) ... at hbar = xi."""
    if len(mods) != ts.nlegs:
        raise LegActionUndefined("one module per leg is needed", (len(mods), ts.nlegs))
    xi = mods[0].xi
    if any(M.xi != xi for M in mods):
        raise LegActionUndefined("modules evaluated at different hbar", [str(M.xi) for M in mods])
    out: dict = {}
    for (z, h, legs), c in ts.terms.items():
        mat = {(0, 0): c * xi ** h}
        size = 1
        for M, leg in zip(mods, legs):
            A = M.leg_matrix(leg)
            if not A:
                mat = {}
                break
            mat = kron(mat, A, M.dim)
            size *= M.dim
        if mat:
            cell = out.setdefault(z, {})
            for k, v in mat.items():
                add_into(cell, k, v)
    return {z: m for z, m in out.items() if m}


def poly_mul(P: dict, Q: dict) -> dict:
    out: dict = {}
    for z1, A in P.items():
        for z2, B in Q.items():
            z = tuple(a + b for a, b in zip(z1, z2))
            C = mat_mul(A, B)
            if C:
                cell = out.setdefault(z, {})
                for k, v in C.items():
                    add_into(cell, k, v)
    return {z: m for z, m in out.items() if m}


def poly_sub(P: dict, Q: dict) -> dict:
    out = {z: dict(m) for z, m in P.items()}
    for z, m in Q.items():
        cell = out.setdefault(z, {})
        for k, v in m.items():
            add_into(cell, k, -v)
    return {z: m for z, m in out.items() if m}


def weight_bound(*mods: SmoothModule) -> int:
    """Largest leg weight that can act nontrivially (S and U parts each raise weight)."""
    return sum(2 * M.max_weight for M in mods)


def hbar_bound(*mods: SmoothModule) -> int:
    """Largest hbar-power of an epsilon-degree-0 series that can act nontrivially."""
    return sum(M.m - 1 for M in mods)


def _check_windows(K: int, W: int, mods) -> None:
    if K < hbar_bound(*mods):
        raise WindowTooSmall("hbar window below the module bound", (K, hbar_bound(*mods)))
    if W < weight_bound(*mods):
        raise WindowTooSmall("weight window below the module bound", (W, weight_bound(*mods)))


def evaluate_R(RM, M1: SmoothModule, M2: SmoothModule, margin: int = 2) -> tuple[dict, Report]:
    """R(z) on M1 (x) M2 as a matrix Laurent polynomial, with a finiteness report.

    R is built to weight bound + margin; every coefficient beyond the bound
    must vanish on the modules.
    """
    B = weight_bound(M1, M2)
    big = RM.at(B + margin)
    _check_windows(big.K, big.W, (M1, M2))
    ev = evaluate(big.R, M1, M2)
    beyond = sorted(z for z in ev if -z[0] > B)
    rep = Report("R(z) on modules is a Laurent polynomial", {"K": big.K, "weight": big.W, "bound": B},
                 f"{M1.label} (x) {M2.label}", [{"nonzero beyond bound": [list(z) for z in beyond]}] if beyond else [],
                 exponents=sorted(z[0] for z in ev))
    return ev, rep


def _place3(ev: dict, slot: int, which: tuple, dims: Sequence[int]) -> dict:
    """Embed a two-leg evaluation on legs ``which`` of a three-fold tensor product."""
    d1, d2, d3 = dims
    out = {}
    for z, A in ev.items():
        zz = [0, 0, 0]
        zz[slot] = z[0]
        B: dict = {}
        for (r, c), v in A.items():
            if which == (0, 1):
                i1, i2 = divmod(r, d2)
                j1, j2 = divmod(c, d2)
                for k in range(d3):
                    B[((i1 * d2 + i2) * d3 + k, (j1 * d2 + j2) * d3 + k)] = v
            elif which == (1, 2):
                for k in range(d1):
                    B[(k * d2 * d3 + r, k * d2 * d3 + c)] = v
            else:
                i1, i3 = divmod(r, d3)
                j1, j3 = divmod(c, d3)
                for k in range(d2):
                    B[((i1 * d2 + k) * d3 + i3, (j1 * d2 + k) * d3 + j3)] = v
        out[tuple(zz)] = B
    return out


def _clear(P: dict, M: int) -> dict:
    out: dict = {}
    for (a, b, e), A in P.items():
        if min(a, b, e) < -M:
            raise WindowTooSmall("pole order exceeds the clearing exponent", ((a, b, e), M))
        a, b, e = a + M, b + M, e + M
        for k in range(e + 1):
            cell = out.setdefault((a + k, b + e - k), {})
            for key, v in A.items():
                add_into(cell, key, v * comb(e, k))
    return {z: m for z, m in out.items() if m}


def verify_qybe_on_modules(RM, M1: SmoothModule, M2: SmoothModule, M3: SmoothModule) -> Report:
    """R12(z1) R13(z1+z2) R23(z2) = R23(z2) R13(z1+z2) R12(z1) as matrix Laurent polynomials."""
    dims = (M1.dim, M2.dim, M3.dim)
    e12, r12 = evaluate_R(RM, M1, M2)
    e13, r13 = evaluate_R(RM, M1, M3)
    e23, r23 = evaluate_R(RM, M2, M3)
    wit = [w for r in (r12, r13, r23) for w in r["witnesses"]]
    A = _place3(e12, 0, (0, 1), dims)
    B = _place3(e13, 2, (0, 2), dims)
    C = _place3(e23, 1, (1, 2), dims)
    lhs = poly_mul(poly_mul(A, B), C)
    rhs = poly_mul(poly_mul(C, B), A)
    diff = poly_sub(lhs, rhs)
    P = max([0] + [-min(z) for z in diff])
    cleared = _clear(diff, P)
    if cleared:
        z = min(cleared)
        wit.append({"check": "QYBE", "zpow": list(z),
                    "entries": [[list(k), [v.numerator, v.denominator]] for k, v in sorted(cleared[z].items())[:5]]})
    return Report("R12(z1) R13(z1+z2) R23(z2) = R23(z2) R13(z1+z2) R12(z1) on modules",
                  {"K": RM.K, "dims": list(dims), "xi": str(M1.xi)}, "matrix Laurent polynomials (cleared)", wit,
                  checks={"lhs_cells": len(lhs), "rhs_cells": len(rhs)})
