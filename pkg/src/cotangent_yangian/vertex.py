"""The level-0 vacuum module V0(g) = U(g_{<0}), its fields and the coproduct Delta_z.

States are dicts ``{pbw monomial: coeff}`` in negative standard modes
``(-n-1, a, G)``.  Field values are dicts ``{(e, monomial): coeff}`` for the
coefficient of ``z^e``.  The field of a generator is

    Y(a_{-n-1}, z) = sum_{k>=n} C(k,n) z^{k-n} a_{-k-1}            (regular)
                   + sum_{j>=0} (-1)^n C(n+j,n) z^{-n-j-1} a_j      (singular)

and composite monomials use the right-nested normal ordering
``Y(a A', z) = a(z)_reg Y(A', z) + Y(A', z) a(z)_sing``.

Loop grading: for every coefficient, ``wt(out) = wt(A) + wt(B) + e`` in terms
of the weight ``wt = -(loop degree)``, so a cap on ``e`` is a cap on the
output weight.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .classical import Report
from .core import G, GSTAR, ONE, ZERO, LieAlgebra, add_into
from .duality import _multisets
from .errors import RequiresWindow
from .pbw import UNIT_LEG, Tensor, shuffle_split
from .yangian import Quantization, gen_leg, quantize


def state_weight(mono: tuple) -> int:
    return -sum(s[0] for s in mono)


def leg_weight(leg) -> int:
    """Loop weight of a Y(d)-leg: eps b t^n weighs n + 1, b t^n weighs n."""
    s, u = leg
    return sum(f[0] + 1 for f in s) + sum(x[0] for x in u)


def legs_weight(legs) -> int:
    return sum(leg_weight(l) for l in legs)


def weight_cap(t: Tensor, W: int) -> Tensor:
    return t.filter(lambda k: legs_weight(k[2]) <= W)


class VacuumModule:
    """V0(g) with the intertwiner Y and the translation T."""

    def __init__(self, lie: LieAlgebra, q: Quantization | None = None, K: int = 2):
        self.lie = lie
        self.q = q if q is not None else quantize(lie=lie, K=K)
        self.env = self.q.env
        self._Y: dict = {}

    # states ------------------------------------------------------------------
    @staticmethod
    def mode(a: int, n: int):
        """The symbol of b_a t^{-n-1}."""
        return (-n - 1, a, G)

    def monomials(self, weight: int) -> list:
        """All PBW monomials of exactly the given weight."""
        syms = [self.mode(a, n) for n in range(weight) for a in range(self.lie.dim)]
        w = lambda s: -s[0]
        return [m for m in _multisets(syms, weight, w, weight) if state_weight(m) == weight]

    def left_mul(self, x, X: Mapping) -> dict:
        out: dict = {}
        for m, c in X.items():
            for m2, c2 in self.env.mul_mono((x,), m).items():
                add_into(out, m2, c * c2)
        return out

    def act(self, x, X: Mapping) -> dict:
        """x . X for a nonnegative mode x (annihilates the vacuum)."""
        out: dict = {}
        for m, c in X.items():
            if x[0] > state_weight(m):
                continue
            for m2, c2 in self.q.left_action(x, m).items():
                add_into(out, m2, c * c2)
        return out

    def T(self, X: Mapping) -> dict:
        """The derivation T(b t^n) = n b t^{n-1}."""
        out: dict = {}
        for m, c in X.items():
            for i, s in enumerate(m):
                word = m[:i] + ((s[0] - 1, s[1], s[2]),) + m[i + 1:]
                for m2, c2 in self.env.normal_order(word).items():
                    add_into(out, m2, c * c2 * s[0])
        return out

    def exp_T(self, X: Mapping, zmax: int, sign: int = -1) -> dict:
        """e^{sign z T} X as {(k, mono): c} for k <= zmax."""
        out: dict = {}
        cur = dict(X)
        for k in range(zmax + 1):
            if not cur:
                break
            w = Fraction(sign ** k, factorial(k))
            for m, c in cur.items():
                add_into(out, (k, m), c * w)
            cur = self.T(cur)
        return out

    # fields ------------------------------------------------------------------
    def reg_sing_split(self, sym, zmax: int, jmax: int) -> tuple[dict, dict]:
        """Regular and singular parts of Y(sym, z) as {e: {mode: coeff}}.

        The regular part is cut at z^zmax and the singular part at the
        annihilation mode jmax.
        """
        n = -sym[0] - 1
        a = sym[1]
        reg: dict = {}
        for k in range(n, n + zmax + 1):
            reg[k - n] = {(-k - 1, a, G): Fraction(comb(k, n))}
        sing: dict = {}
        sgn = (-1) ** n
        for j in range(jmax + 1):
            sing[-n - j - 1] = {(j, a, G): Fraction(sgn * comb(n + j, n))}
        return reg, sing

    def _Y_mono(self, A: tuple, B: tuple, zmax: int) -> dict:
        if not A:
            return {(0, B): ONE} if zmax >= 0 else {}
        lo = -state_weight(A) - state_weight(B)
        if zmax < lo:
            return {}
        key = (A, B)
        hit = self._Y.get(key)
        if hit is not None and hit[0] >= zmax:
            return hit[1] if hit[0] == zmax else {k: v for k, v in hit[1].items() if k[0] <= zmax}
        a1, rest = A[0], A[1:]
        n = -a1[0] - 1
        out: dict = {}
        # a(z)_reg Y(A', z) B
        inner = self._Y_mono(rest, B, zmax)
        for (e, X), c in inner.items():
            for k in range(n, n + zmax - e + 1):
                v = c * comb(k, n)
                for m, c2 in self.env.mul_mono(((-k - 1, a1[1], G),), X).items():
                    add_into(out, (e + k - n, m), v * c2)
        # Y(A', z) a(z)_sing B
        sgn = (-1) ** n
        for j in range(state_weight(B) + 1):
            e0 = -n - j - 1
            v0 = sgn * comb(n + j, n)
            for Xm, c in self.q.left_action((j, a1[1], G), B).items():
                for (e, m), c2 in self._Y_mono(rest, Xm, zmax - e0).items():
                    add_into(out, (e + e0, m), v0 * c * c2)
        self._Y[key] = (zmax, out)
        return out

    def Y(self, A: Mapping, B: Mapping, zmax: int) -> dict:
        """Y(A, z)B for states A, B (A expanded in PBW monomials), z-powers <= zmax."""
        out: dict = {}
        for ma, ca in A.items():
            for mb, cb in B.items():
                for k, v in self._Y_mono(ma, mb, zmax).items():
                    add_into(out, k, ca * cb * v)
        return out

    def intertwiner(self, A: tuple, B: Mapping, zmax: int) -> dict:
        return self.Y({tuple(A): ONE}, B, zmax)

    def commutator_field(self, A: tuple, B: tuple, zmax: int) -> dict:
        """The singular coefficients A_(n) B; their count bounds the locality order."""
        return {k: v for k, v in self._Y_mono(A, B, zmax).items() if k[0] < 0}

    def locality_order(self, A: tuple, B: tuple) -> int:
        low = min((e for (e, _) in self._Y_mono(A, B, 0)), default=0)
        return max(0, -low)


# --- Delta_z --------------------------------------------------------------------

class MeromorphicCoproduct:
    """Delta_z on Y_hbar(d), reconstructed from <Delta_z f, A (x) B> = <f, Y(A, z)B>.

    Outputs are two-leg tensors with one spectral variable, kept for legs of
    total weight <= W (weights are additive, so the cut is exact).
    """

    def __init__(self, V: VacuumModule, W: int, K: int | None = None):
        self.V = V
        self.q = V.q
        self.K = self.q.K if K is None else K
        self.W = W
        self.split = self.q.split
        self._lin: dict = {}
        self._gen: dict = {}
        self._leg: dict = {}

    def _minus(self, wmax: int) -> list:
        lie = self.V.lie
        return [VacuumModule.mode(a, n) for n in range(wmax) for a in range(lie.dim)]

    def _pairs(self, W: int) -> list:
        syms = self._minus(W)
        w = lambda s: -s[0]
        out = []
        mus = _multisets(syms, self.K + 1, w, W)
        for mu in mus:
            wm = state_weight(mu)
            for nu in mus:
                if len(mu) + len(nu) <= self.K + 1 and wm + state_weight(nu) <= W:
                    out.append((mu, nu))
        return out

    def _lin_Y(self, mu: tuple, nu: tuple, zmax: int) -> dict:
        """Linear part of Y(sym mu, z) sym nu as {e: {minus mode: coeff}}."""
        key = (mu, nu)
        hit = self._lin.get(key)
        if hit is not None and hit[0] >= zmax:
            return hit[1]
        env = self.V.env
        Y = self.V.Y(env.sym(mu), env.sym(nu), zmax)
        by_e: dict = {}
        for (e, m), c in Y.items():
            by_e.setdefault(e, {})[m] = c
        out = {}
        for e, X in by_e.items():
            lin = env.linear_part(X)
            if lin:
                out[e] = lin
        self._lin[key] = (zmax, out)
        return out

    def delta_gen(self, g) -> Tensor:
        r = self._gen.get(g)
        if r is not None:
            return r
        q = self.q
        if g[2] != GSTAR:
            # tau_z(x) (x) 1 + 1 (x) x
            t = Tensor(None, 2, 1, self.K)
            for (z, h, (leg,)), c in q.translate_leg(gen_leg(g)).terms.items():
                add_into(t.terms, (z, h, (leg, UNIT_LEG)), c)
            add_into(t.terms, ((0,), 0, (UNIT_LEG, gen_leg(g))), ONE)
            r = weight_cap(t, self.W)
        else:
            n = g[0]
            t = Tensor(None, 2, 1, self.K)
            for mu, nu in self._pairs(self.W):
                h = len(mu) + len(nu) - 1
                if h < 0 or h > self.K:
                    continue
                e = n + 1 - state_weight(mu) - state_weight(nu)
                lin = self._lin_Y(mu, nu, max(e, 0)).get(e)
                if not lin:
                    continue
                p = sum((c * self.split.pair_gen(g, s) for s, c in lin.items()), ZERO)
                if not p:
                    continue
                for s1, v1 in self.split.dual_mono(mu).items():
                    for s2, v2 in self.split.dual_mono(nu).items():
                        add_into(t.terms, ((e,), h, ((s1, ()), (s2, ()))), p * v1 * v2)
            r = t
        self._gen[g] = r
        return r

    def delta_leg(self, leg) -> Tensor:
        r = self._leg.get(leg)
        if r is not None:
            return r
        s, u = leg
        word = s + u
        if not word:
            r = Tensor.unit(2, 1, self.K)
        elif len(word) == 1:
            r = self.delta_gen(word[0])
        else:
            head = (s, u[:-1]) if u else (s[:-1], ())
            last = u[-1] if u else s[-1]
            r = weight_cap(self.delta_leg(head).mul(self.delta_gen(last), self.q.algs2, self.K), self.W)
        self._leg[leg] = r
        return r

    def delta(self, t: Tensor) -> Tensor:
        """Delta_z on a one-leg element (an algebra map)."""
        out = Tensor(None, 2, 1, self.K)
        for (z, h, (leg,)), c in t.terms.items():
            for (z2, h2, legs), c2 in self.delta_leg(leg).terms.items():
                if h + h2 <= self.K:
                    add_into(out.terms, (z2, h + h2, legs), c * c2)
        return out


def delta_z(g, lie: LieAlgebra | None = None, W: int | None = None, K: int = 2,
            mc: MeromorphicCoproduct | None = None) -> Tensor:
    """Delta_z of a generator of Y_hbar(d); ``W`` caps the total leg weight."""
    if mc is None:
        if W is None:
            raise RequiresWindow("Delta_z is an infinite z^{-1} series; give a weight window")
        mc = MeromorphicCoproduct(VacuumModule(lie, K=K), W, K)
    return mc.delta_gen(g)


# --- verification -----------------------------------------------------------------

def _sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        add_into(out, k, -v)
    return out


def _state_json(V: VacuumModule, d: Mapping, limit: int = 6) -> list:
    rows = []
    for k, v in sorted(d.items(), key=lambda kv: repr(kv[0]))[:limit]:
        rows.append({"key": repr(k), "coeff": [v.numerator, v.denominator]})
    return rows


def check_vacuum(V: VacuumModule, A: tuple, zmax: int) -> dict:
    """Y(1, z)A - A and Y(A, z)1 - e^{-zT}A."""
    one = {(): ONE}
    d1 = _sub(V.Y(one, {A: ONE}, zmax), {(0, A): ONE})
    d2 = _sub(V.Y({A: ONE}, one, zmax), V.exp_T({A: ONE}, zmax))
    d1.update({("creation",) + k: v for k, v in d2.items()})
    return d1


def check_skew(V: VacuumModule, A: tuple, B: tuple, zmax: int) -> dict:
    """Y(A, z)B - e^{-zT} Y(B, -z)A up to z^zmax."""
    lhs = V._Y_mono(A, B, zmax)
    rhs: dict = {}
    for (e, m), c in V._Y_mono(B, A, zmax).items():
        c = c * (-1) ** (e % 2)
        for (k, m2), c2 in V.exp_T({m: ONE}, zmax - e).items():
            add_into(rhs, (e + k, m2), c * c2)
    return _sub(lhs, rhs)


def check_translation(V: VacuumModule, A: tuple, B: tuple, zmax: int) -> dict:
    """Y(TA, z)B = -d/dz Y(A, z)B and T Y(A, z)B - Y(A, z)TB = -d/dz Y(A, z)B."""
    base = V._Y_mono(A, B, zmax + 1)
    deriv: dict = {}
    for (e, m), c in base.items():
        if e and e - 1 <= zmax:
            add_into(deriv, (e - 1, m), -e * c)
    lhs = V.Y(V.T({A: ONE}), {B: ONE}, zmax)
    d1 = _sub(lhs, deriv)
    TB = V.T({B: ONE})
    comm: dict = {}
    for (e, m), c in V._Y_mono(A, B, zmax).items():
        for m2, c2 in V.T({m: ONE}).items():
            add_into(comm, (e, m2), c * c2)
    for k, v in V.Y({A: ONE}, TB, zmax).items():
        add_into(comm, k, -v)
    d2 = _sub(comm, deriv)
    d1.update({("T",) + k: v for k, v in d2.items()})
    return d1


def check_grading(V: VacuumModule, A: tuple, B: tuple, zmax: int) -> list:
    tot = state_weight(A) + state_weight(B)
    return [k for k in V._Y_mono(A, B, zmax) if state_weight(k[1]) - k[0] != tot]


def check_coalgebra(V: VacuumModule, A: tuple, B: tuple, zmax: int) -> dict:
    """Delta(Y(A, z)B) = sum Y(A1, z)B1 (x) Y(A2, z)B2 for the shuffle coproduct."""
    lhs: dict = {}
    for (e, m), c in V._Y_mono(A, B, zmax).items():
        for l, r, cc in shuffle_split(m):
            add_into(lhs, (e, l, r), c * cc)
    rhs: dict = {}
    for A1, A2, ca in shuffle_split(A):
        for B1, B2, cb in shuffle_split(B):
            Y1 = V._Y_mono(A1, B1, zmax - (-state_weight(A2) - state_weight(B2)))
            Y2 = V._Y_mono(A2, B2, zmax - (-state_weight(A1) - state_weight(B1)))
            for (e1, m1), c1 in Y1.items():
                for (e2, m2), c2 in Y2.items():
                    if e1 + e2 <= zmax:
                        add_into(rhs, (e1 + e2, m1, m2), ca * cb * c1 * c2)
    return _sub(lhs, rhs)


def check_associativity(V: VacuumModule, A: tuple, B: tuple, C: tuple, Emax: int = 1) -> dict:
    """Weak associativity by clearing the pole at z1 = w - z2.

    With N the locality order of (A, B), P(w, z2) = (w - z2)^N Y(A, w)Y(B, z2)C
    (expanded in |w| > |z2|) is a Laurent polynomial, and P(z1 + z2, z2)
    expanded in |z2| > |z1| must equal z1^N Y(Y(A, z1)B, z2)C.  Terms of
    total z-degree <= Emax + N are compared.
    """
    N = V.locality_order(A, B)
    wa, wb, wc = state_weight(A), state_weight(B), state_weight(C)
    E2 = Emax + N + wa + wc
    # F2 in |w| > |z2|
    F2: dict = {}
    for (e2, X), c in V._Y_mono(B, C, E2).items():
        for (e1, m), c2 in V._Y_mono(A, X, Emax - e2).items():
            add_into(F2, (e1, e2, m), c * c2)
    P: dict = {}
    for (e1, e2, m), c in F2.items():
        for k in range(N + 1):
            if e2 + k <= E2:
                add_into(P, (e1 + N - k, e2 + k, m), c * comb(N, k) * (-1) ** k)
    bad: dict = {}
    for (e, f, m), c in P.items():
        if e < -(wa + wc):
            bad[("not polynomial", e, f, m)] = c
    Z1 = Emax + N + wb + wc
    lhs: dict = {}
    for (e, f, m), c in P.items():
        if e >= 0:
            for k in range(e + 1):
                add_into(lhs, (k, e - k + f, m), c * comb(e, k))
        else:
            for k in range(Z1 + 1):
                add_into(lhs, (k, e - k + f, m), c * Fraction(_binom(e, k)))
    rhs: dict = {}
    for (e1, X), c in V._Y_mono(A, B, Z1 - N).items():
        for (e2, m), c2 in V._Y_mono(X, C, Emax - e1).items():
            add_into(rhs, (e1 + N, e2, m), c * c2)
    cmp = {k: v for k, v in _sub(lhs, rhs).items() if k[0] <= Z1 and k[0] + k[1] <= Emax + N}
    bad.update(cmp)
    return bad


def _binom(e: int, k: int) -> int:
    """Generalized binomial C(e, k) for integer e and k >= 0."""
    num = 1
    for i in range(k):
        num *= e - i
    return num // factorial(k)


def verify_vertex_axioms(lie: LieAlgebra, depth: int = 3, zmax: int = 3, Emax: int = 1,
                         V: VacuumModule | None = None, triples: Iterable | None = None) -> Report:
    """Vacuum/creation, skew-symmetry, translation, loop grading, coalgebra
    compatibility and weak associativity on monomials of total weight <= depth."""
    V = V or VacuumModule(lie)
    monos = [m for w in range(depth + 1) for m in V.monomials(w)]
    counts: dict = {}
    wit: list = []

    def record(name, label, d):
        counts[name] = counts.get(name, 0) + 1
        if d:
            wit.append({"check": name, "states": [repr(x) for x in label], "defect": _state_json(V, d)})

    for A in monos:
        record("vacuum", [A], check_vacuum(V, A, zmax))
    pairs = [(A, B) for A in monos for B in monos if state_weight(A) + state_weight(B) <= depth]
    for A, B in pairs:
        record("skew", [A, B], check_skew(V, A, B, zmax))
        record("translation", [A, B], check_translation(V, A, B, zmax))
        record("grading", [A, B], {k: ONE for k in check_grading(V, A, B, zmax)})
        record("coalgebra", [A, B], check_coalgebra(V, A, B, zmax))
    if triples is None:
        triples = [(A, B, C) for A in monos if A for B in monos if B for C in monos
                   if state_weight(A) + state_weight(B) + state_weight(C) <= depth]
    for A, B, C in triples:
        record("associativity", [A, B, C], check_associativity(V, A, B, C, Emax))
    return Report("vertex algebra axioms for V0(g)", {"depth": depth, "zmax": zmax, "Emax": Emax},
                  "z-Laurent; associativity after clearing (z1 + z2)-expansions", wit,
                  checks={k: counts[k] for k in sorted(counts)})


def verify_delta_z_hom(mc: MeromorphicCoproduct, pairs: Iterable, Wcmp: int) -> Report:
    """[Delta_z a, Delta_z b] = Delta_z [a, b] on legs of weight <= Wcmp.

    Every factor is cut at the same total leg weight, which is an exact
    truncation because weights add under multiplication.
    """
    q = mc.q
    wit = []
    n = 0
    for a, b in pairs:
        n += 1
        A, B = q.element(a), q.element(b)
        br = q.mul(A, B) - q.mul(B, A)
        da, db = mc.delta_gen(a), mc.delta_gen(b)
        lhs = weight_cap(da.mul(db, q.algs2, q.K) - db.mul(da, q.algs2, q.K), Wcmp)
        rhs = weight_cap(mc.delta(br), Wcmp)
        d = lhs - rhs
        if d:
            wit.append({"pair": [q.sym_json(a), q.sym_json(b)], "defect": q.tensor_json(d)[:5]})
    return Report("Delta_z is an algebra map", {"K": q.K, "weight": Wcmp}, "z=inf", wit, checks={"pairs": n})
