"""The Hopf algebra A(rho) = S(g(r)^*)[[hbar]] # U(g[t]) and its finite analogue.

Elements are one-leg :class:`~cotangent_yangian.pbw.Tensor` objects whose
legs are normal-ordered ``(s, u)``: ``s`` a sorted tuple of S-side symbols
``(n, a, GSTAR)`` and ``u`` a PBW word in plus-symbols.  The structure maps
come from the matched pair U(p) = U(p_-) (x) U(p_+):

* x |> A and x <| A (x in p_+, A in U(p_-)) by normal ordering in U(p)
  (route A) or by the recursive formulas (route B),
* [x, f] = -sum_mu <f, x |> sym mu> hbar^{|mu|-1} mu^v  (extended by Leibniz),
* Delta(x) = x (x) 1 + sum_mu hbar^{|mu|} mu^v (x) (x <| sym mu),
* Delta(f) = sum_{mu,nu} <f, sym mu sym nu> hbar^{|mu|+|nu|-1} mu^v (x) nu^v,
* S(f) = -f, S(x) = -x - sum_{mu != 0} (-hbar)^{|mu|} mu^v (x <| sym mu).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from .classical import Report, RMatrixInput, cobracket, cobracket_z, gamma, lift_rho
from .core import G, GSTAR, ONE, R, ZERO, HPoly, LieAlgebra, add_into, load_lie_algebra
from .duality import BaseSplitting, FiniteSplitting, LoopSplitting, sym_to_json
from .errors import RequiresDifferenceDependence
from .pbw import UNIT_LEG, Enveloping, Tensor, merge_sorted

Leg = tuple


class SmashAlgebra:
    """Multiplication of legs (s1, u1)(s2, u2) = s1 . (u1 s2) . u2.

    ``comm(x, f)`` returns [x, f] for a plus-symbol x and an S-symbol f as
    ``{(h, s_mono): c}``; u s is straightened with x s = s x + [x, s].
    """

    def __init__(self, U: Enveloping, comm: Callable, K: int):
        self.U = U
        self.comm = comm
        self.K = K
        self._move: dict = {}
        self._cm: dict = {}
        self._lm: dict = {}

    def comm_mono(self, x, s: tuple) -> dict:
        key = (x, s)
        r = self._cm.get(key)
        if r is not None:
            return r
        out: dict = {}
        for i, f in enumerate(s):
            if i and s[i - 1] == f:
                # identical factors: the derivation hits each copy, handled below
                continue
            mult = s.count(f)
            rest = s[:i] + s[i + 1:]
            for (h, sm), c in self.comm(x, f).items():
                if h <= self.K:
                    add_into(out, (h, merge_sorted(rest, sm)), c * mult)
        self._cm[key] = out
        return out

    def move(self, u: tuple, s: tuple) -> dict:
        """u . s rewritten as sum hbar^h s' u'."""
        if not u or not s:
            return {(0, s, u): ONE}
        key = (u, s)
        r = self._move.get(key)
        if r is not None:
            return r
        x, rest = u[0], u[1:]
        out: dict = {}
        for (h, s1, u1), c in self.move(rest, s).items():
            for u2, c2 in self.U.insert(x, u1).items():
                add_into(out, (h, s1, u2), c * c2)
            if s1:
                for (h2, s2), c3 in self.comm_mono(x, s1).items():
                    if h + h2 <= self.K:
                        add_into(out, (h + h2, s2, u1), c * c3)
        self._move[key] = out
        return out

    def leg_mul(self, l1: Leg, l2: Leg) -> list:
        key = (l1, l2)
        r = self._lm.get(key)
        if r is not None:
            return r
        (s1, u1), (s2, u2) = l1, l2
        acc: dict = {}
        for (h, s, u), c in self.move(u1, s2).items():
            ss = merge_sorted(s1, s)
            for m, c2 in self.U.mul_mono(u, u2).items():
                add_into(acc, (h, (ss, m)), c * c2)
        r = [(h, leg, c) for (h, leg), c in acc.items()]
        self._lm[key] = r
        return r


def _hashable(x):
    return tuple(x) if isinstance(x, list) else x


def gen_leg(sym) -> Leg:
    return ((sym,), ()) if sym[2] == GSTAR else ((), (sym,))


def evaluate(t: Tensor, xi) -> dict:
    """Substitute hbar = xi: {(z, legs): value}."""
    xi = Fraction(xi)
    out: dict = {}
    for (z, h, legs), c in t.terms.items():
        add_into(out, (z, legs), c * xi ** h)
    return out


class Quantization:
    """A(rho) (or a finite matched-pair quantization) truncated at hbar^K."""

    def __init__(self, split: BaseSplitting, K: int | None = None):
        self.split = split
        self.K = split.K if K is None else K
        self.env = split.env
        self.A = SmashAlgebra(self.env, self.commutator_dict, self.K)
        self.algs1 = [self.A]
        self.algs2 = [self.A, self.A]
        self._ra: dict = {}
        self._la: dict = {}
        self._comm: dict = {}
        self._dgen: dict = {}
        self._dleg: dict = {}
        self._sgen: dict = {}
        self._pairlin: dict = {}
        self._leftlin: dict = {}
        self.corrupt = None  # fault-injection hook for tests

    # --- generators --------------------------------------------------------
    @property
    def finite(self) -> bool:
        return isinstance(self.split, FiniteSplitting)

    def plus_symbols(self, N: int) -> list:
        if self.finite:
            return [(0, j, G) for j in range(len(self.split.plus))]
        return [(n, a, G) for n in range(N + 1) for a in range(self.split.lie.dim)]

    def s_symbols(self, N: int) -> list:
        if self.finite:
            return [(0, i, GSTAR) for i in range(len(self.split.minus))]
        return [(n, a, GSTAR) for n in range(N + 1) for a in range(self.split.lie.dim)]

    def generators(self, N: int) -> list:
        return self.plus_symbols(N) + self.s_symbols(N)

    def element(self, sym, c=1, h: int = 0) -> Tensor:
        return Tensor.mono((gen_leg(sym),), h, c, K=self.K)

    def unit(self, nlegs: int = 1) -> Tensor:
        return Tensor.unit(nlegs, 0, self.K)

    def mul(self, a: Tensor, b: Tensor) -> Tensor:
        return a.mul(b, [self.A] * a.nlegs, self.K)

    # --- matched-pair actions ------------------------------------------------
    def right_action(self, x, mono: tuple) -> dict:
        """x <| mono in p_+ by normal ordering (route A)."""
        key = (x, mono)
        r = self._ra.get(key)
        if r is None:
            r = {}
            for m, c in self.env.mul_mono((x,), mono).items():
                if m and all(not self.split.is_minus(s) for s in m):
                    add_into(r, m, c)
            self._ra[key] = r
        return r

    def left_action(self, x, mono: tuple) -> dict:
        """x |> mono in U(p_-) (route A)."""
        key = (x, mono)
        r = self._la.get(key)
        if r is None:
            r = {}
            for m, c in self.env.mul_mono((x,), mono).items():
                if all(self.split.is_minus(s) for s in m):
                    add_into(r, m, c)
            self._la[key] = r
        return r

    def right_action_B(self, x, word: Sequence) -> dict:
        """x <| (y1 ... yk) = p_+[.. p_+[x, y1] .., yk] (route B)."""
        cur = {x: ONE}
        for y in word:
            nxt: dict = {}
            for s, c in cur.items():
                for t, v in self.split.p_plus(self.env.bracket(s, y)).items():
                    add_into(nxt, t, c * v)
            cur = nxt
        return {(s,): c for s, c in cur.items()}

    def left_action_B(self, x, word: Sequence) -> dict:
        """x |> (y rest) = y (x |> rest) + p_-[x,y] rest + p_+[x,y] |> rest."""
        word = tuple(word)
        if not word:
            return {}
        y, rest = word[0], word[1:]
        out: dict = {}
        for m, c in self.left_action_B(x, rest).items():
            for m2, c2 in self.env.mul_mono((y,), m).items():
                add_into(out, m2, c * c2)
        br = self.env.bracket(x, y)
        restn = self.env.normal_order(rest)
        for s, v in self.split.p_minus(br).items():
            for m, c in restn.items():
                for m2, c2 in self.env.mul_mono((s,), m).items():
                    add_into(out, m2, v * c * c2)
        for s, v in self.split.p_plus(br).items():
            for m, c in self.left_action_B(s, rest).items():
                add_into(out, m, v * c)
        return out

    def _on_sym(self, fn, x, mu: tuple) -> dict:
        out: dict = {}
        for m, c in self.env.sym(mu).items():
            for k, v in fn(x, m).items():
                add_into(out, k, c * v)
        return out

    def right_sym(self, x, mu: tuple, route: str = "A") -> dict:
        return self._on_sym(self.right_action if route == "A" else self.right_action_B, x, mu)

    def left_sym(self, x, mu: tuple, route: str = "A") -> dict:
        return self._on_sym(self.left_action if route == "A" else self.left_action_B, x, mu)

    # --- structure maps on generators ---------------------------------------
    def _linear_part(self, A: Mapping) -> dict:
        return self.env.linear_part(A)

    def commutator_dict(self, x, f) -> dict:
        key = (x, f)
        r = self._comm.get(key)
        if r is not None:
            return r
        sp = self.split
        out: dict = {}
        for mu in sp.comm_monomials(x, f):
            lin = self._leftlin.get((x, mu))
            if lin is None:
                lin = self._leftlin[(x, mu)] = self._linear_part(self.left_sym(x, mu))
            p = sum((c * sp.pair_gen(f, s) for s, c in lin.items()), ZERO)
            if not p:
                continue
            h = len(mu) - 1
            for sm, v in sp.dual_mono(mu).items():
                add_into(out, (h, sm), -p * v)
        self._comm[key] = out
        return out

    def commutator(self, x, f) -> Tensor:
        """[x, f] for a plus generator x and an S-generator f."""
        t = Tensor(None, 1, 0, self.K)
        for (h, sm), c in self.commutator_dict(x, f).items():
            if h <= self.K:
                add_into(t.terms, ((), h, ((sm, ()),)), c)
        return t

    def phi(self, x) -> Tensor:
        sp = self.split
        t = Tensor({((), 0, (UNIT_LEG, ((), (x,)))): ONE}, 2, 0, self.K)
        for mu in sp.phi_monomials(x):
            h = len(mu)
            if h > self.K:
                continue
            act = self.right_sym(x, mu)
            if not act:
                continue
            for sm, v in sp.dual_mono(mu).items():
                for m, c in act.items():
                    add_into(t.terms, ((), h, ((sm, ()), ((), m))), v * c)
        return t

    def coproduct_gen(self, g) -> Tensor:
        r = self._dgen.get(g)
        if r is not None:
            return r
        if g[2] == GSTAR:
            r = self._coproduct_s(g)
        else:
            r = self.phi(g)
            add_into(r.terms, ((), 0, (((), (g,)), UNIT_LEG)), ONE)
        if self.corrupt is not None:
            r = self.corrupt(g, r)
        self._dgen[g] = r
        return r

    def _coproduct_s(self, f) -> Tensor:
        sp = self.split
        t = Tensor(None, 2, 0, self.K)
        for mu, nu in sp.coproduct_pairs(f):
            h = len(mu) + len(nu) - 1
            if h < 0 or h > self.K:
                continue
            lin = self._pairlin.get((mu, nu))
            if lin is None:
                lin = self._linear_part(self.env.multiply(self.env.sym(mu), self.env.sym(nu)))
                self._pairlin[(mu, nu)] = lin
            p = sum((c * sp.pair_gen(f, s) for s, c in lin.items()), ZERO)
            if not p:
                continue
            for s1, v1 in sp.dual_mono(mu).items():
                for s2, v2 in sp.dual_mono(nu).items():
                    add_into(t.terms, ((), h, ((s1, ()), (s2, ()))), p * v1 * v2)
        return t

    def coproduct_leg(self, leg: Leg) -> Tensor:
        r = self._dleg.get(leg)
        if r is not None:
            return r
        s, u = leg
        word = s + u
        if not word:
            r = self.unit(2)
        elif len(word) == 1:
            r = self.coproduct_gen(word[0])
        else:
            # split off the last generator: leg = (leg without it) * last
            if u:
                head, last = (s, u[:-1]), u[-1]
            else:
                head, last = (s[:-1], ()), s[-1]
            r = self.coproduct_leg(head).mul(self.coproduct_gen(last), self.algs2, self.K)
        self._dleg[leg] = r
        return r

    def coproduct(self, a: Tensor) -> Tensor:
        """Delta on a one-leg element (an algebra map)."""
        out = Tensor(None, 2, a.nz, self.K, a.zwin)
        for (z, h, (leg,)), c in a.terms.items():
            for (z2, h2, legs), c2 in self.coproduct_leg(leg).terms.items():
                if h + h2 <= self.K:
                    add_into(out.terms, (z, h + h2, legs), c * c2)
        return out

    def antipode_gen(self, g) -> Tensor:
        r = self._sgen.get(g)
        if r is not None:
            return r
        if g[2] == GSTAR:
            r = self.element(g, -1)
        else:
            r = self.element(g, -1)
            sp = self.split
            for mu in sp.phi_monomials(g):
                h = len(mu)
                if h > self.K:
                    continue
                act = self.right_sym(g, mu)
                sign = -((-1) ** h)
                for sm, v in sp.dual_mono(mu).items():
                    for m, c in act.items():
                        add_into(r.terms, ((), h, ((sm, m),)), sign * v * c)
        self._sgen[g] = r
        return r

    def antipode(self, a: Tensor) -> Tensor:
        """S on a one-leg element (anti-multiplicative)."""
        out = Tensor(None, 1, a.nz, self.K, a.zwin)
        for (z, h, (leg,)), c in a.terms.items():
            s, u = leg
            cur = self.unit(1)
            for x in reversed(u):
                cur = cur.mul(self.antipode_gen(x), self.algs1, self.K)
            sign = -1 if len(s) % 2 else 1
            cur = cur.mul(Tensor.mono(((s, ()),), 0, sign, K=self.K), self.algs1, self.K)
            for (z2, h2, legs), c2 in cur.terms.items():
                if h + h2 <= self.K:
                    add_into(out.terms, (z, h + h2, legs), c * c2)
        return out

    @staticmethod
    def counit_leg(leg: Leg) -> Fraction:
        return ONE if leg == UNIT_LEG else ZERO

    def counit(self, a: Tensor) -> HPoly:
        acc: dict = {}
        for (z, h, legs), c in a.terms.items():
            if all(l == UNIT_LEG for l in legs):
                add_into(acc, h, c)
        return HPoly(acc, self.K)

    # --- maps applied on one leg of a multi-leg tensor ---------------------
    def apply_on_leg(self, t: Tensor, leg: int, fn: Callable[[Leg], Tensor]) -> Tensor:
        """Replace leg ``leg`` by the tensor fn(leg) (which may have several legs)."""
        out = None
        for (z, h, legs), c in t.terms.items():
            img = fn(legs[leg])
            if out is None:
                out = Tensor(None, t.nlegs - 1 + img.nlegs, t.nz, self.K, t.zwin)
            for (z2, h2, l2), c2 in img.terms.items():
                if h + h2 <= self.K:
                    zz = tuple(a + b for a, b in zip(z, z2)) if z2 and z else (z or z2)
                    add_into(out.terms, (zz, h + h2, legs[:leg] + l2 + legs[leg + 1:]), c * c2)
        return out if out is not None else Tensor(None, t.nlegs, t.nz, self.K)

    def multiply_legs(self, t: Tensor) -> Tensor:
        """nabla on a two-leg tensor."""
        out = Tensor(None, 1, t.nz, self.K, t.zwin)
        for (z, h, (l1, l2)), c in t.terms.items():
            for hh, leg, cc in self.A.leg_mul(l1, l2):
                if h + hh <= self.K:
                    add_into(out.terms, (z, h + hh, (leg,)), c * cc)
        return out

    def leg_element(self, leg: Leg) -> Tensor:
        return Tensor.mono((leg,), K=self.K)

    # --- translation ---------------------------------------------------------
    def translate_leg(self, leg: Leg, zmax: int | None = None) -> Tensor:
        """tau_z = exp(zT) on a leg, T(X t^n) = n X t^{n-1} on both sides."""
        s, u = leg
        cur = Tensor({((0,), 0, (((), ()),)): ONE}, 1, 1, self.K)
        for g in s + u:
            n = g[0]
            img = Tensor(None, 1, 1, self.K)
            for k in range(n + 1):
                add_into(img.terms, ((k,), 0, (gen_leg((n - k, g[1], g[2])),)), Fraction(comb(n, k)))
            cur = cur.mul(img, self.algs1, self.K)
        return cur

    def T(self, a: Tensor) -> Tensor:
        """The derivation T on a one-leg element (z^1 coefficient of tau_z)."""
        out = Tensor(None, 1, a.nz, self.K, a.zwin)
        for (z, h, (leg,)), c in a.terms.items():
            for (z2, h2, legs), c2 in self.translate_leg(leg).terms.items():
                if z2 == (1,):
                    add_into(out.terms, (z, h + h2, legs), c * c2)
        return out

    def _require_difference(self):
        sp = self.split
        if self.finite or not sp.r.difference_only:
            raise RequiresDifferenceDependence("Delta_{hbar,z} needs a difference-dependent r")

    def coproduct_z(self, g) -> Tensor:
        """Delta_{hbar,z}(g) = (tau_z (x) 1) Delta_hbar(g); a polynomial in z."""
        self._require_difference()
        d = self.coproduct_gen(g)
        return self.apply_on_leg(d.map_z(lambda z: (0,), 1), 0, self.translate_leg)

    # --- JSON ------------------------------------------------------------------
    def sym_json(self, s):
        if self.finite:
            return self.split.name(s)
        return sym_to_json(s)

    def tensor_json(self, t: Tensor) -> list:
        groups: dict = {}
        for (z, h, legs), c in t.terms.items():
            key = (z, tuple(tuple(_hashable(self.sym_json(x)) for x in l[0] + l[1]) for l in legs))
            groups.setdefault(key, []).append([h, c.numerator, c.denominator])
        rows = []
        for (z, legs), hb in groups.items():
            row = {"legs": [[list(x) if isinstance(x, tuple) else x for x in l] for l in legs], "hbar": sorted(hb)}
            if z:
                row["zpow"] = list(z)
            rows.append(row)
        rows.sort(key=lambda r: json.dumps(r, sort_keys=True))
        return rows


# --- verification --------------------------------------------------------------

def _diff_witness(q: Quantization, label, t: Tensor, limit: int = 6) -> list:
    return [{"at": label, "term": row} for row in q.tensor_json(t)[:limit]]


def verify_hopf(q: Quantization, gens: Iterable | None = None, N: int = 2, checks: Sequence[str] | None = None) -> Report:
    """Coassociativity, counit, antipode and [Delta a, Delta b] = Delta [a, b] on generators."""
    gens = list(gens) if gens is not None else q.generators(N)
    checks = checks or ("coassoc", "counit", "antipode", "hom")
    wit: list = []
    counts: dict = {}

    def record(name, label, t):
        counts[name] = counts.get(name, 0) + 1
        if t:
            wit.append({"check": name, "witness": _diff_witness(q, [q.sym_json(s) for s in label], t)})

    for g in gens:
        d = q.coproduct_gen(g)
        if "coassoc" in checks:
            lhs = q.apply_on_leg(d, 0, q.coproduct_leg)
            rhs = q.apply_on_leg(d, 1, q.coproduct_leg)
            record("coassoc", [g], lhs - rhs)
        if "counit" in checks:
            x = q.element(g)
            for leg in (0, 1):
                red = q.apply_on_leg(d, leg, lambda l: _counit_tensor(q, l))
                record("counit", [g], red - x)
        if "antipode" in checks:
            for leg in (0, 1):
                sd = q.apply_on_leg(d, leg, lambda l: q.antipode(q.leg_element(l)))
                record("antipode", [g], q.multiply_legs(sd))
    if "hom" in checks:
        for i, a in enumerate(gens):
            for b in gens[i:]:
                if a[2] == GSTAR and b[2] != GSTAR:
                    a2, b2 = b, a
                else:
                    a2, b2 = a, b
                br = commutator_element(q, a2, b2)
                da, db = q.coproduct_gen(a2), q.coproduct_gen(b2)
                lhs = q.mul(da, db) - q.mul(db, da)
                record("hom", [a2, b2], lhs - q.coproduct(br))
    rep = Report("Hopf axioms", {"K": q.K, "generators": len(gens)}, "formal", wit,
                 "pass" if not wit else "fail", checks={k: counts[k] for k in sorted(counts)})
    return rep


def _counit_tensor(q: Quantization, leg: Leg) -> Tensor:
    t = Tensor(None, 0, 0, q.K)
    if leg == UNIT_LEG:
        t.terms[((), 0, ())] = ONE
    return t


def commutator_element(q: Quantization, a, b) -> Tensor:
    """[a, b] in A for two generators, computed from the defining relations."""
    A, B = q.element(a), q.element(b)
    return q.mul(A, B) - q.mul(B, A)


def verify_quantization(q: Quantization, gens: Iterable | None = None, N: int = 2, shifted: bool = False) -> Report:
    """hbar^1 part of Delta - Delta^op against the classical cobracket."""
    if q.finite:
        raise ValueError("verify_quantization compares with the loop cobracket")
    rho = lift_rho(q.split.r)
    gens = list(gens) if gens is not None else q.generators(N)
    wit = []
    for g in gens:
        d = q.coproduct_gen(g)
        diff = (d - d.permute_legs((1, 0))).hpart(1)
        if shifted:
            diff = q.apply_on_leg(diff.map_z(lambda z: (0,), 1), 0, q.translate_leg)
            classical = cobracket_z(rho, {g: ONE})
        else:
            classical = cobracket(rho, {g: ONE})
        ref = Tensor(None, 2, 1 if shifted else 0, q.K)
        for (z, (s1, s2)), v in classical.items():
            add_into(ref.terms, (z if shifted else (), 1, (gen_leg(s1), gen_leg(s2))), v)
        bad = diff - ref
        if bad:
            wit.append({"generator": q.sym_json(g), "defect": q.tensor_json(bad)[:6]})
    return Report("Delta - Delta^op = hbar delta + O(hbar^2)", {"K": q.K, "generators": len(gens)},
                  "z-polynomial" if shifted else "formal", wit, "pass" if not wit else "fail")


def verify_action_routes(q: Quantization, gens: Iterable, mus: Iterable) -> list:
    """Disagreements between the two routes for |> and <|."""
    bad = []
    for x in gens:
        for mu in mus:
            if q.right_sym(x, mu, "A") != q.right_sym(x, mu, "B"):
                bad.append(("right", x, mu))
            if q.left_sym(x, mu, "A") != q.left_sym(x, mu, "B"):
                bad.append(("left", x, mu))
    return bad


# --- constructors ------------------------------------------------------------------

def quantize(r: RMatrixInput | None = None, lie: LieAlgebra | None = None, K: int = 3) -> Quantization:
    if r is None:
        r = gamma(lie)
    return Quantization(LoopSplitting(r, K), K)


def build_matched_pair(spec: Mapping | str, K: int | None = None) -> Quantization:
    """Quantize a finite matched pair p = p_+ + p_-.

    ``spec`` (dict or path to JSON)::

        {"lie": "sl2" | {...}, "plus": {"H": {"h": 1}, "E": {"e": 1}},
         "minus": {"F": {"f": 1}}, "K": 3}

    Vectors are given in the labels of the Lie algebra.
    """
    if isinstance(spec, str):
        with open(spec) as fh:
            spec = json.load(fh)
    lie = load_lie_algebra(spec["lie"])
    K = int(spec.get("K", 3)) if K is None else K

    def vecs(part):
        names = list(part)
        out = []
        for n in names:
            out.append({lie.labels.index(k) if isinstance(k, str) else int(k) - 1: Fraction(v)
                        for k, v in part[n].items()})
        return names, out

    pn, pv = vecs(spec["plus"])
    mn, mv = vecs(spec["minus"])
    return Quantization(FiniteSplitting(lie, pv, mv, K, pn, mn), K)


BOREL_SPEC = {"lie": "sl2", "plus": {"H": {"h": 1}, "E": {"e": 1}}, "minus": {"F": {"f": 1}}, "K": 3}


def borel_summary(q: Quantization) -> dict:
    """Structure constants of a finite quantization on its generators."""
    out = {"brackets": [], "coproduct": [], "antipode": []}
    for x in q.plus_symbols(0):
        for f in q.s_symbols(0):
            out["brackets"].append({"x": q.sym_json(x), "f": q.sym_json(f),
                                    "value": q.tensor_json(q.commutator(x, f))})
    for g in q.generators(0):
        out["coproduct"].append({"gen": q.sym_json(g), "value": q.tensor_json(q.coproduct_gen(g))})
        out["antipode"].append({"gen": q.sym_json(g), "value": q.tensor_json(q.antipode_gen(g))})
    return out
