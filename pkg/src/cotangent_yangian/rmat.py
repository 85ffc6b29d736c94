"""r_sing, r_reg, the twisting matrix R_s(z), the spectral R-matrix and its identities.

All series live in Y_hbar(d)^{(x) n} with spectral exponents in the tensor
keys.  Every structure map is homogeneous for the loop weight (eps b t^n
weighs n + 1, b t^n weighs n, z weighs 1), so cutting at a total leg weight
W is an exact truncation: products never lower the leg weight of what they
are fed.  For R_s(z) and R(z) the leg weight is minus the z-exponent.

Multi-variable identities use exponents (z1, z2, w) with w = z1 + z2 a
declared mixed variable.  Series from different regions are compared by
:func:`reexpand` into a common region, or by clearing denominators.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .classical import Report, RMatrixInput, casimir_pairs
from .core import G, GSTAR, ONE, LieAlgebra, add_into
from .errors import DomainUndeclared, NoUnitLeadingTerm, RequiresRational, WindowTooSmall
from .pbw import UNIT_LEG, Tensor
from .twist import Twist
from .vertex import MeromorphicCoproduct, VacuumModule, _binom, legs_weight
from .yangian import Quantization, gen_leg, quantize

Z1, Z2, W3 = 0, 1, 2  # exponent slots of (z1, z2, w = z1 + z2)
DOMAINS = ("|z1|>|z2|", "|z2|>|z1|", "|w|>|z2|")


# --- weight-capped arithmetic ----------------------------------------------------

def _buckets(t: Tensor) -> list:
    by: dict = {}
    for k, c in t.terms.items():
        by.setdefault((k[1], legs_weight(k[2])), []).append((k, c))
    return sorted(by.items(), key=lambda kv: kv[0])


def cmul(a: Tensor, b: Tensor, algs: Sequence, K: int, W: int | None = None) -> Tensor:
    """a * b keeping hbar^{<= K} and total leg weight <= W."""
    out = Tensor(None, a.nlegs, max(a.nz, b.nz), K)
    acc = out.terms
    bb = _buckets(b)
    nl = a.nlegs
    for (z1, h1, legs1), c1 in a.terms.items():
        w1 = legs_weight(legs1)
        for (h2, w2), items in bb:
            if h1 + h2 > K or (W is not None and w1 + w2 > W):
                continue
            for (z2, _, legs2), c2 in items:
                z = tuple(x + y for x, y in zip(z1, z2)) if z1 else z2
                partial = [(h1 + h2, (), c1 * c2)]
                for i in range(nl):
                    prods = algs[i].leg_mul(legs1[i], legs2[i])
                    nxt = []
                    for hp, lp, cp in partial:
                        for hl, l, cl in prods:
                            if hp + hl <= K:
                                nxt.append((hp + hl, lp + (l,), cp * cl))
                    partial = nxt
                    if not partial:
                        break
                for hp, lp, cp in partial:
                    add_into(acc, (z, hp, lp), cp)
    return out


def cap(t: Tensor, W: int) -> Tensor:
    return t.filter(lambda k: legs_weight(k[2]) <= W)


def exp_capped(x: Tensor, algs, K: int, W: int) -> Tensor:
    res = Tensor.unit(x.nlegs, x.nz, K)
    term = res
    for n in range(1, K + 1):
        term = cmul(term, x, algs, K, W).scale(Fraction(1, n))
        if not term:
            break
        res = res + term
    return res


def invert(ts: Tensor, algs: Sequence, K: int | None = None, W: int | None = None) -> Tensor:
    """Inverse of a series 1 + y with y small in (hbar, leg weight), by the geometric series."""
    K = ts.K if K is None else K
    unit = Tensor.unit(ts.nlegs, ts.nz, K)
    if ts.unit_part() != ONE:
        raise NoUnitLeadingTerm("leading term is not 1", ts.unit_part())
    y = ts - unit
    for (z, h, legs), c in y.terms.items():
        if h == 0 and legs_weight(legs) == 0:
            raise NoUnitLeadingTerm("leading term is not the unit", (z, legs, c))
    res, term = unit, unit
    for _ in range(K + (W or 0) + 1):
        term = cmul(term, y, algs, K, W).scale(-1)
        if not term:
            break
        res = res + term
    return res


def conj_exp(r: Tensor, X: Tensor, algs, K: int, W: int, sign: int = -1) -> Tensor:
    """e^{sign ad r} X = e^{sign r} X e^{-sign r} for r of hbar-valuation >= 1."""
    out = X
    cur = X
    for k in range(1, K + 1):
        cur = (cmul(r, cur, algs, K, W) - cmul(cur, r, algs, K, W)).scale(Fraction(sign, k))
        if not cur:
            break
        out = out + cur
    return out


# --- spectral-variable plumbing -----------------------------------------------------

def zmap(t: Tensor, f, nz: int) -> Tensor:
    """Relabel exponents: f(z) -> (new z, coefficient factor)."""
    out = Tensor(None, t.nlegs, nz, t.K)
    for (z, h, legs), c in t.terms.items():
        z2, s = f(z)
        add_into(out.terms, (z2, h, legs), c * s)
    return out


def negate_z(t: Tensor) -> Tensor:
    """f(z) -> f(-z)."""
    return zmap(t, lambda z: (z, -1 if sum(z) % 2 else 1), t.nz)


def place(t: Tensor, nlegs: int, positions: Sequence[int], slot: int, nz: int = 3) -> Tensor:
    """Embed a one-variable series on a leg pair of an nlegs tensor, z -> the given slot."""
    def f(z):
        zz = [0] * nz
        zz[slot] = z[0] if z else 0
        return tuple(zz), 1
    return zmap(t, f, nz).embed(nlegs, positions)


def translate_on_leg(q: Quantization, t: Tensor, leg: int, slot: int, nz: int | None = None) -> Tensor:
    """(tau_{z_slot} on one leg) t."""
    nz = t.nz if nz is None else nz
    out = Tensor(None, t.nlegs, nz, q.K)
    for (z, h, legs), c in t.terms.items():
        base = list(z) + [0] * (nz - len(z))
        for (z2, h2, (l,)), c2 in q.translate_leg(legs[leg]).terms.items():
            zz = list(base)
            zz[slot] += z2[0]
            add_into(out.terms, (tuple(zz), h + h2, legs[:leg] + (l,) + legs[leg + 1:]), c * c2)
    return out


def reexpand(t: Tensor, domain: str, order: int, exact_order: int | None = None) -> Tensor:
    """Expand the mixed variable of a (z1, z2, w) series into a region.

    ``|z1|>|z2|`` and ``|z2|>|z1|`` substitute w = z1 + z2 and keep powers
    of the small variable up to ``order``.  ``|w|>|z2|`` substitutes
    z1 = w - z2 and keeps z2-powers from the binomial up to ``order``.
    ``exact_order`` bounds the order to which the input is itself exact.
    """
    if t.nz != 3:
        raise DomainUndeclared("series has no declared (z1, z2, z1+z2) structure", t.nz)
    if domain not in DOMAINS:
        raise DomainUndeclared("unknown domain", domain)
    if order < 0 or (exact_order is not None and order > exact_order):
        raise WindowTooSmall("requested order exceeds the exact window", (order, exact_order))
    out = Tensor(None, t.nlegs, 3, t.K)
    for (z, h, legs), c in t.terms.items():
        a, b, e = z
        if domain == "|w|>|z2|":
            top = a if a >= 0 else order
            for k in range(top + 1):
                add_into(out.terms, ((0, b + k, e + a - k), h, legs), c * _binom(a, k) * (-1) ** k)
            continue
        big, small = (Z1, Z2) if domain == "|z1|>|z2|" else (Z2, Z1)
        top = e if e >= 0 else order
        for k in range(top + 1):
            zz = [a, b, 0]
            zz[small] += k
            zz[big] += e - k
            add_into(out.terms, (tuple(zz), h, legs), c * _binom(e, k))
    return out


def substitute_w(t: Tensor) -> Tensor:
    """w -> z1 + z2 for a series with non-negative w-exponents (a polynomial step)."""
    out = Tensor(None, t.nlegs, 3, t.K)
    for (z, h, legs), c in t.terms.items():
        a, b, e = z
        if e < 0:
            raise DomainUndeclared("negative power of z1 + z2 needs a region", z)
        for k in range(e + 1):
            add_into(out.terms, ((a + k, b + e - k, 0), h, legs), c * comb(e, k))
    return out


def times_binomial(t: Tensor, n: int, first: int, second: int, sign: int = 1) -> Tensor:
    """Multiply by (x_first + sign x_second)^n."""
    out = Tensor(None, t.nlegs, t.nz, t.K)
    for (z, h, legs), c in t.terms.items():
        for k in range(n + 1):
            zz = list(z)
            zz[first] += n - k
            zz[second] += k
            add_into(out.terms, (tuple(zz), h, legs), c * comb(n, k) * sign ** k)
    return out


def clear_denominators(t: Tensor, M: int) -> Tensor:
    """(z1 z2 w)^M times a finite (z1, z2, w) Laurent polynomial, with w = z1 + z2."""
    for z, _, _ in t.terms:
        if min(z) < -M:
            raise WindowTooSmall("pole order exceeds the clearing exponent", (z, M))
    return substitute_w(zmap(t, lambda z: (tuple(x + M for x in z), 1), 3))


# --- the series ------------------------------------------------------------------------

def r_sing(lie: LieAlgebra, D: int, K: int = 2, corrupt: bool = False) -> Tensor:
    """hbar sum (-1)^i C(i+j, i) I^a_i (x) I_{a,j} z^{-i-j-1} down to z^{-D}.

    ``corrupt`` drops the sign (-1)^i (a fault-injection hook; the QYBE sees it from weight 3).
    """
    t = Tensor(None, 2, 1, K)
    cas = lie.casimir()
    for k in range(1, D + 1):
        for i in range(k):
            v = comb(k - 1, i) * (1 if corrupt else (-1) ** i)
            for (a, b), c in cas.items():
                add_into(t.terms, ((-k,), 1, (gen_leg((i, a, GSTAR)), gen_leg((k - 1 - i, b, G)))), c * v)
    return t


def r_reg(lie: LieAlgebra, N: int, K: int = 2) -> Tensor:
    """hbar sum_{i <= j} C(j, i) z^{j-i} I^a_i (x) I_{a,-j-1} for j <= N."""
    t = Tensor(None, 2, 1, K)
    cas = lie.casimir()
    for j in range(N + 1):
        for i in range(j + 1):
            for (a, b), c in cas.items():
                add_into(t.terms, ((j - i,), 1, (gen_leg((i, a, GSTAR)), ((), ((-j - 1, b, G),)))), c * comb(j, i))
    return t


def rho_gamma_expansion(lie: LieAlgebra, D: int) -> Tensor:
    """C_d / (z + t1 - t2) expanded at z = infinity, down to z^{-D}."""
    t = Tensor(None, 2, 1, 1)
    pairs = casimir_pairs(lie, "d")
    for k in range(D):
        for i in range(k + 1):
            v = comb(k, i) * (-1) ** i
            for ((_, a, sa), (_, b, sb)), c in pairs.items():
                add_into(t.terms, ((-k - 1,), 0, (gen_leg((i, a, sa)), gen_leg((k - i, b, sb)))), c * v)
    return t


class RMatrices:
    """r_sing, R_s, R_s^{-1}, R and R^{-1} of Y_hbar(d) at leg weight <= W, hbar^{<= K}."""

    def __init__(self, lie: LieAlgebra, K: int = 2, W: int = 4, q: Quantization | None = None,
                 corrupt: bool = False):
        self.lie, self.K, self.W, self.corrupt = lie, K, W, corrupt
        self.q = q if q is not None else quantize(lie=lie, K=K)
        self.algs2 = [self.q.A] * 2
        self.algs3 = [self.q.A] * 3
        self.rs = r_sing(lie, W, K, corrupt)
        self.Rs = exp_capped(self.rs, self.algs2, K, W)
        self.Rs_inv = exp_capped(-self.rs, self.algs2, K, W)
        Rs21m = negate_z(self.Rs.permute_legs((1, 0)))
        self.R = cmul(Rs21m, self.Rs_inv, self.algs2, K, W)
        self.R_inv = cmul(self.Rs, negate_z(self.Rs_inv.permute_legs((1, 0))), self.algs2, K, W)
        self._mc: dict = {}
        self._up: dict = {}
        self._V = None

    def at(self, W: int) -> "RMatrices":
        """The same series at a larger weight cap (shares the quantization)."""
        if W <= self.W:
            return self
        hit = self._up.get(W)
        if hit is None:
            hit = self._up[W] = RMatrices(self.lie, self.K, W, self.q, self.corrupt)
            hit._V = self._V
        return hit

    def mc(self, W: int | None = None) -> MeromorphicCoproduct:
        W = self.W if W is None else W
        hit = self._mc.get(W)
        if hit is None:
            if self._V is None:
                self._V = VacuumModule(self.lie, self.q, self.K)
            hit = self._mc[W] = MeromorphicCoproduct(self._V, W, self.K)
        return hit

    def delta_hz(self, g) -> Tensor:
        """(tau_z (x) 1) Delta_hbar(g)."""
        return translate_on_leg(self.q, self.q.coproduct_gen(g), 0, 0, nz=1)


def R_s(lie: LieAlgebra, D: int, K: int = 2) -> Tensor:
    return RMatrices(lie, K, D).Rs


def full_R(lie: LieAlgebra, D: int, K: int = 2) -> Tensor:
    return RMatrices(lie, K, D).R


def gen_weight(g) -> int:
    return g[0] + 1 if g[2] == GSTAR else g[0]


# --- R_s identities ----------------------------------------------------------------------

def _rows(q: Quantization, t: Tensor, n: int = 5) -> list:
    return q.tensor_json(t)[:n]


def verify_intertwining(M: RMatrices, gens: Iterable, zdepth: int = 4, perturb: Tensor | None = None) -> Report:
    """R_s(z)^{-1} (tau_z (x) 1)Delta_hbar(a) R_s(z) = Delta_z(a) on z^e, e >= -zdepth."""
    gens = list(gens)
    q, K = M.q, M.K
    Wmax = max(gen_weight(g) for g in gens) + zdepth
    big = M.at(Wmax)
    r = big.rs if perturb is None else big.rs + perturb
    mc = big.mc(Wmax)
    wit = []
    for g in gens:
        Wc = gen_weight(g) + zdepth
        lhs = conj_exp(r, cap(big.delta_hz(g), Wc), M.algs2, K, Wc, -1)
        d = cap(lhs - mc.delta_gen(g), Wc)
        if d:
            wit.append({"generator": q.sym_json(g), "defect": _rows(q, d)})
    return Report("R_s(z)^{-1} (tau_z (x) 1)Delta_hbar(a) R_s(z) = Delta_z(a)",
                  {"K": K, "zdepth": zdepth}, "z=inf", wit, checks={"generators": len(gens)})


def uniqueness_perturbation(lie: LieAlgebra, K: int = 2) -> Tensor:
    """hbar z^{-1} C(I^a_0 (x) I_{a,0}): doubles the leading term of r_sing."""
    return r_sing(lie, 1, K)


def _delta_u_leg(q: Quantization, leg) -> Tensor:
    """Delta_z on a U(g[t])-leg: the algebra map x -> tau_z(x) (x) 1 + 1 (x) x."""
    s, u = leg
    if s:
        raise ValueError("polynomial Delta_z needs a U(g[t])-leg")
    cur = Tensor.unit(2, 1, q.K)
    for x in u:
        g = Tensor(None, 2, 1, q.K)
        for (z, h, (l,)), c in q.translate_leg(gen_leg(x)).terms.items():
            add_into(g.terms, (z, h, (l, UNIT_LEG)), c)
        add_into(g.terms, ((0,), 0, (UNIT_LEG, gen_leg(x))), ONE)
        cur = cur.mul(g, q.algs2, q.K)
    return cur


def _delta_second(q: Quantization, t: Tensor, W: int) -> Tensor:
    """(1 (x) Delta_{z2}) of a series in w; result in (z1, z2, w) with legs weight <= W."""
    out = Tensor(None, 3, 3, q.K)
    for (z, h, (l1, l2)), c in t.terms.items():
        for (z2, h2, (a, b)), c2 in _delta_u_leg(q, l2).terms.items():
            legs = (l1, a, b)
            if h + h2 <= q.K and legs_weight(legs) <= W:
                add_into(out.terms, ((0, z2[0], z[0]), h + h2, legs), c * c2)
    return out


def _hz_first(q: Quantization, t: Tensor) -> Tensor:
    """(Delta_{hbar,z1} (x) 1) of a series in z2; result in (z1, z2, w)."""
    d = q.apply_on_leg(t, 0, q.coproduct_leg)
    return translate_on_leg(q, zmap(d, lambda z: ((0, z[0], 0), 1), 3), 0, Z1)


def _diff_report(q, identity, window, domain, d, extra=None) -> Report:
    wit = [{"defect": _rows(q, d)}] if d else []
    return Report(identity, window, domain, wit, **(extra or {}))


def verify_aux_lemma(M: RMatrices, W: int = 3, order: int = 3) -> Report:
    """(1 (x) Delta_{z2}) R_s(z1+z2) = R_s^{12}(z1) R_s^{13}(z1+z2) in |w| > |z2|; hbar^1 is additivity."""
    q = M.q
    big = M.at(W + order)
    keep = lambda k: legs_weight(k[2]) <= W and k[0][Z2] <= order
    lhs = _delta_second(q, big.Rs, W)
    rhs = cmul(place(big.Rs, 3, (0, 1), Z1), place(big.Rs, 3, (0, 2), W3), M.algs3, M.K, W)
    d = (lhs - reexpand(rhs, "|w|>|z2|", order)).filter(keep)
    wit = [{"check": "R_s", "defect": _rows(q, d)}] if d else []
    r1 = _delta_second(q, big.rs, W)
    add = reexpand(place(big.rs, 3, (0, 1), Z1), "|w|>|z2|", order) + place(big.rs, 3, (0, 2), W3)
    d1 = (r1 - add).filter(keep)
    if d1:
        wit.append({"check": "hbar^1 additivity", "defect": _rows(q, d1)})
    return Report("(1 (x) Delta_{z2}) R_s(z1+z2) = R_s^{12}(z1) R_s^{13}(z1+z2)",
                  {"K": M.K, "weight": W, "z2 order": order}, "|w|>|z2|", wit)


def verify_hz_lemma(M: RMatrices, W: int = 3, order: int = 3) -> Report:
    """(Delta_{hbar,z1} (x) 1) R_s(z2) = R_s^{23}(z2) R_s^{13}(z1+z2) in |z2| > |z1|."""
    q = M.q
    big = M.at(W + order)
    lhs = _hz_first(q, big.Rs)
    rhs = cmul(place(big.Rs, 3, (1, 2), Z2), place(big.Rs, 3, (0, 2), W3), M.algs3, M.K, W)
    d = (lhs - reexpand(rhs, "|z2|>|z1|", order)).filter(
        lambda k: legs_weight(k[2]) <= W and k[0][Z1] <= order)
    return _diff_report(q, "(Delta_{hbar,z1} (x) 1) R_s(z2) = R_s^{23}(z2) R_s^{13}(z1+z2)",
                        {"K": M.K, "weight": W, "z1 order": order}, "|z2|>|z1|", d)


def verify_cocycle(M: RMatrices, W: int = 2, pole: int | None = None) -> Report:
    """(Delta_{z1} (x) 1)(R_s(z2)^{-1}) R_s^{12}(z1)^{-1} = (1 (x) Delta_{z2})(R_s(z1+z2)^{-1}) R_s^{23}(z2)^{-1}.

    The left side is a series in |z2| > |z1|, the right side in |w| > |z2|.
    At each leg both expand N / (z1^p z2^p w^p) with N a polynomial, so
    z1^p w^p LHS and z1^p w^p RHS must be finite Laurent polynomials that
    agree after w = z1 + z2.  Both products are computed exactly on the
    exponent range this needs; finiteness is checked, not assumed.
    """
    q, K = M.q, M.K
    p = W if pole is None else pole
    Z = 3 * p                      # z1-range of the cleared LHS that is needed
    A3 = M.algs3
    wit: list = []
    big = M.at(Z + 2 * W)
    mc = big.mc(W)
    # LHS: Delta_{z1} on leg 1 of R_s(z2)^{-1}, times R_s^{12}(z1)^{-1}
    lhs = Tensor(None, 3, 3, K)
    for (z, h, (l1, l2)), c in big.Rs_inv.terms.items():
        if legs_weight((l2,)) > W or legs_weight((l1,)) > Z + W:
            continue
        for (z1, h1, (a, b)), c1 in mc.delta_leg(l1).terms.items():
            legs = (a, b, l2)
            if h + h1 <= K and legs_weight(legs) <= W:
                add_into(lhs.terms, ((z1[0], z[0], 0), h + h1, legs), c * c1)
    lhs = cmul(lhs, place(big.Rs_inv, 3, (0, 1), Z1), A3, K, W)
    # RHS: (1 (x) Delta_{z2}) R_s(w)^{-1}, times R_s^{23}(z2)^{-1}
    rhs = _delta_second(q, cap(big.Rs_inv, 2 * p + 2 * W), W)
    rhs = cmul(rhs, place(big.Rs_inv, 3, (1, 2), Z2), A3, K, W)
    # clear and compare
    L = times_binomial(zmap(lhs, lambda z: ((z[0] + p, z[1], 0), 1), 3), p, Z1, Z2)
    L = L.filter(lambda k: k[0][Z1] <= Z)
    Rr = times_binomial(zmap(rhs, lambda z: ((0, z[1], z[2] + p), 1), 3), p, W3, Z2, -1)
    Rr = Rr.filter(lambda k: k[0][Z2] <= 2 * p + W)
    low = [k for k in L.terms if k[0][Z1] < 0 or k[0][Z2] < -p]
    neg = [k for k in Rr.terms if k[0][W3] < 0]
    if low:
        wit.append({"check": "left side not cleared by z1^p w^p", "terms": len(low)})
    if neg:
        wit.append({"check": "right side not cleared by z1^p w^p", "terms": len(neg)})
    if not wit:
        d = L - substitute_w(Rr)
        if d:
            wit.append({"check": "cleared numerators", "defect": _rows(q, d)})
    return Report("(Delta_{z1} (x) 1)(R_s(z2)^{-1}) R_s^{12}(z1)^{-1} = "
                  "(1 (x) Delta_{z2})(R_s(z1+z2)^{-1}) R_s^{23}(z2)^{-1}",
                  {"K": K, "weight": W, "clearing exponent": p}, "rational in z1, z2, z1+z2 (cleared)", wit,
                  checks={"lhs_terms": len(L), "rhs_terms": len(Rr)})


# --- R identities -------------------------------------------------------------------------

def semiclassical_defect(M: RMatrices) -> Tensor:
    """hbar^1 part of R(z) plus rho(t1 + z - t2): zero when R = 1 - hbar rho + O(hbar^2)."""
    out = Tensor(None, 2, 1, 1)
    for (z, h, legs), c in M.R.hpart(1).terms.items():
        add_into(out.terms, (z, 0, legs), c)
    for k, c in rho_gamma_expansion(M.lie, M.W).terms.items():
        add_into(out.terms, k, c)
    return out


def _ybe_sides(R: Tensor, algs, K: int, W: int):
    R12 = place(R, 3, (0, 1), Z1)
    R13 = place(R, 3, (0, 2), W3)
    R23 = place(R, 3, (1, 2), Z2)
    lhs = cmul(cmul(R12, R13, algs, K, W), R23, algs, K, W)
    rhs = cmul(cmul(R23, R13, algs, K, W), R12, algs, K, W)
    return lhs, rhs


def verify_qybe(M: RMatrices, W: int | None = None, R: Tensor | None = None) -> Report:
    """R12(z1) R13(z1+z2) R23(z2) = R23(z2) R13(z1+z2) R12(z1) as rational functions.

    At a fixed leg both sides are finite Laurent polynomials in (z1, z2, w)
    with poles of order <= W, so clearing (z1 z2 w)^W and putting w = z1 + z2
    decides equality exactly.  The hbar^2 part of the same computation for
    1 + hbar r_1 is the classical spectral YBE of the first-order part.
    """
    W = M.W if W is None else W
    R = cap(M.at(W).R if R is None else R, W)
    lhs, rhs = _ybe_sides(R, M.algs3, M.K, W)
    d = clear_denominators(lhs - rhs, W)
    wit = [{"check": "QYBE", "defect": _rows(M.q, d)}] if d else []
    unit = Tensor.unit(2, 1, 2)
    cl, cr = _ybe_sides(unit + R.hpart(1), M.algs3, 2, W)
    cyb = clear_denominators((cl - cr).hpart(2), W)
    if cyb:
        wit.append({"check": "classical YBE of the hbar^1 part", "defect": _rows(M.q, cyb)})
    return Report("R12(z1) R13(z1+z2) R23(z2) = R23(z2) R13(z1+z2) R12(z1)", {"K": M.K, "weight": W},
                  "rational in z1, z2, z1+z2 (cleared)", wit,
                  checks={"lhs_terms": len(lhs), "rhs_terms": len(rhs)})


def verify_coproduct_R(M: RMatrices, W: int = 3, order: int = 2) -> Report:
    """(Delta_{hbar,z1} (x) 1) R(z2) = R13(z1+z2) R23(z2) in |z2| > |z1|."""
    q = M.q
    big = M.at(W + order)
    lhs = _hz_first(q, big.R)
    rhs = cmul(place(big.R, 3, (0, 2), W3), place(big.R, 3, (1, 2), Z2), M.algs3, M.K, W)
    d = (lhs - reexpand(rhs, "|z2|>|z1|", order)).filter(
        lambda k: legs_weight(k[2]) <= W and k[0][Z1] <= order)
    return _diff_report(q, "(Delta_{hbar,z1} (x) 1) R(z2) = R13(z1+z2) R23(z2)",
                        {"K": M.K, "weight": W, "z1 order": order}, "|z2|>|z1|", d)


def verify_coproduct_R_right(M: RMatrices, W: int = 3, order: int = 2) -> Report:
    """(1 (x) Delta_{hbar,z2}) R(z1+z2) = R13(z1+z2) R12(z1) in |z1| > |z2|."""
    q = M.q
    big = M.at(W + order)
    d2 = q.apply_on_leg(big.R, 1, q.coproduct_leg)
    lhs = translate_on_leg(q, zmap(d2, lambda z: ((0, 0, z[0]), 1), 3), 1, Z2)
    lhs = reexpand(lhs, "|z1|>|z2|", order)
    rhs = cmul(place(big.R, 3, (0, 2), W3), place(big.R, 3, (0, 1), Z1), M.algs3, M.K, W)
    rhs = reexpand(rhs, "|z1|>|z2|", order)
    d = (lhs - rhs).filter(lambda k: legs_weight(k[2]) <= W and k[0][Z2] <= order)
    return _diff_report(q, "(1 (x) Delta_{hbar,z2}) R(z1+z2) = R13(z1+z2) R12(z1)",
                        {"K": M.K, "weight": W, "z2 order": order}, "|z1|>|z2|", d)


def verify_op_intertwining(M: RMatrices, gens: Iterable, W: int = 4) -> Report:
    """(tau_z (x) 1)Delta_hbar^op(a) R(z) = R(z) (tau_z (x) 1)Delta_hbar(a)."""
    q = M.q
    R = M.at(W).R
    gens = list(gens)
    wit = []
    for g in gens:
        d = q.coproduct_gen(g)
        X = translate_on_leg(q, d, 0, 0, nz=1)
        Xop = translate_on_leg(q, d.permute_legs((1, 0)), 0, 0, nz=1)
        diff = cmul(Xop, R, M.algs2, M.K, W) - cmul(R, X, M.algs2, M.K, W)
        if diff:
            wit.append({"generator": q.sym_json(g), "defect": _rows(q, diff)})
    return Report("(tau_z (x) 1)Delta_hbar^op(a) R(z) = R(z) (tau_z (x) 1)Delta_hbar(a)",
                  {"K": M.K, "weight": W}, "z=inf", wit, checks={"generators": len(gens)})


def _shifted(src: Tensor, order: int, K: int) -> Tensor:
    """X(z3 + z1 - z2) expanded for large z3, (z1, z2)-degree <= order."""
    out = Tensor(None, src.nlegs, 3, K)
    for (z, h, legs), c in src.terms.items():
        e = z[0]
        for m in range(order + 1):
            b = c * _binom(e, m)
            for k1 in range(m + 1):
                add_into(out.terms, ((k1, m - k1, e - m), h, legs), b * comb(m, k1) * (-1) ** (m - k1))
    return out


def _translated(q: Quantization, src: Tensor) -> Tensor:
    """(tau_{z1} (x) tau_{z2}) X(z3)."""
    t = zmap(src, lambda z: ((0, 0, z[0]), 1), 3)
    return translate_on_leg(q, translate_on_leg(q, t, 0, 0), 1, 1)


def verify_translation(M: RMatrices, W: int = 3, order: int = 2, which: str = "R") -> Report:
    """(tau_{z1} (x) tau_{z2}) X(z3) = X(z3 + z1 - z2) in |z3| > |z1|, |z2|, for X = R, R_s or r_sing."""
    q = M.q
    big = M.at(W + order)
    src = {"R": big.R, "R_s": big.Rs, "r_sing": big.rs}[which]
    d = (_translated(q, src) - _shifted(cap(src, W), order, M.K)).filter(
        lambda k: legs_weight(k[2]) <= W and k[0][0] + k[0][1] <= order)
    return _diff_report(q, f"(tau_z1 (x) tau_z2) {which}(z3) = {which}(z3 + z1 - z2)",
                        {"K": M.K, "weight": W, "order": order}, "|z3|>|z1|,|z2|", d)


# --- twisted R ------------------------------------------------------------------------------

class TwistedR:
    """R_rho(z) = F^{21}(-z) R(z) F(z)^{-1} with F(z) = (tau_z (x) 1) F, F the twist from gamma to r.

    F(z) is polynomial in z at each hbar-order but not weight-homogeneous,
    so the series is kept mod hbar^2, where the only infinite factor is the
    first-order part of R and a z-exponent window is exact.
    """

    def __init__(self, r: RMatrixInput, zdepth: int = 4, N: int = 2):
        if not r.difference_only:
            raise RequiresRational("R_rho needs a translation-invariant rational r", sorted(r.tail.items()))
        self.r, self.zdepth, self.K = r, zdepth, 1
        lie = r.lie
        self.q = quantize(lie=lie, K=self.K)
        self.tw = Twist(RMatrixInput(lie, {}, True), r, self.K, N)
        self.algs2 = self.q.algs2
        self.F = self.tw.F.truncate(self.K)
        self.Finv = self.tw.Finv.truncate(self.K)
        self.top = max((legs_weight(k[2]) for k in self.F.terms), default=0)
        self.Wr = zdepth + N + 1 + self.top
        self.M = RMatrices(lie, self.K, self.Wr, self.q)
        lift = lambda t: zmap(t, lambda z: ((0,), 1), 1)
        Fz_inv = translate_on_leg(self.q, lift(self.Finv), 0, 0)
        F21m = negate_z(translate_on_leg(self.q, lift(self.F.permute_legs((1, 0))), 1, 0))
        self.R = F21m.mul(self.M.R, self.algs2, self.K).mul(Fz_inv, self.algs2, self.K)

    def coproduct(self, g) -> Tensor:
        """F Delta_gamma(g) F^{-1}, the coproduct of A(r) carried over by Psi."""
        d = self.q.coproduct_gen(g)
        return self.F.mul(d, self.algs2, self.K).mul(self.Finv, self.algs2, self.K)


def twisted_R(r: RMatrixInput, zdepth: int = 4, N: int = 2) -> Tensor:
    return TwistedR(r, zdepth, N).R


def verify_twisted_R(T: TwistedR, gens: Iterable, order: int = 2) -> Report:
    """R_rho (tau_z (x) 1)Delta'(a) = (tau_z (x) 1)Delta'^op(a) R_rho and translation, mod hbar^2."""
    q, A = T.q, T.algs2
    gens = list(gens)
    wit = []
    lift = lambda t: zmap(t, lambda z: ((0,), 1), 1)
    for g in gens:
        d = T.coproduct(g)
        X = translate_on_leg(q, lift(d), 0, 0)
        Xop = translate_on_leg(q, lift(d.permute_legs((1, 0))), 0, 0)
        diff = (T.R.mul(X, A, T.K) - Xop.mul(T.R, A, T.K)).filter(lambda k: k[0][0] >= -T.zdepth)
        if diff:
            wit.append({"check": "intertwining", "generator": q.sym_json(g), "defect": _rows(q, diff)})
    lim = -T.zdepth
    d = (_translated(q, T.R) - _shifted(T.R, order, T.K)).filter(
        lambda k: k[0][0] + k[0][1] <= order and k[0][2] >= lim)
    if d:
        wit.append({"check": "translation", "defect": _rows(q, d)})
    return Report("R_rho (tau_z (x) 1)Delta'(a) R_rho^{-1} = (tau_z (x) 1)Delta'^op(a)",
                  {"K": T.K, "zdepth": T.zdepth, "order": order}, "z=inf", wit, checks={"generators": len(gens)})


def series_json(q: Quantization, t: Tensor, domain: str = "z=inf") -> dict:
    """{domain, terms: [{zpow, tensor}]} grouped by spectral exponent."""
    by: dict = {}
    for k, c in t.terms.items():
        by.setdefault(k[0], Tensor(None, t.nlegs, 0, t.K)).terms[((), k[1], k[2])] = c
    return {"domain": domain,
            "terms": [{"zpow": list(z), "tensor": q.tensor_json(by[z])} for z in sorted(by, reverse=True)]}
