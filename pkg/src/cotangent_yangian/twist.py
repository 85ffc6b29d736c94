"""Group-like factorization across a splitting and the quantum twist F.

For two r-matrices r1, r2 the canonical element E_{r1} (S-leg in the
coordinates of A(r1), U-leg in U(g((t))) written in the r2-basis) factors
uniquely as ``exp(Y) exp(X_+)`` with ``Y`` in S (x) g(r2) and ``X_+`` in
S (x) g[t].  Reading ``Y = sum hbar Psi(J^a_n) (x) r2_{a,n}`` gives the
algebra isomorphism Psi: A(r2) -> A(r1) (identity on U(g[t])), and
``F = exp(X_+)`` is the twist: (Psi (x) Psi) Delta_{r2} = F Delta_{r1}(Psi .) F^{-1}.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .classical import Report, RMatrixInput, lift_rho
from .core import G, GSTAR, ONE, ZERO, add_into
from .duality import SYM, LoopSplitting
from .errors import InternalError
from .pbw import UNIT_LEG, Enveloping, Tensor, exp_truncated, log_truncated, merge_sorted
from .yangian import Quantization, gen_leg


def _project(t: Tensor, keep_minus: bool, is_minus, leg: int) -> Tensor:
    """p_- or p_+ on the U-leg of a primitive (Lie) element."""
    out = t.like()
    for k, v in t.terms.items():
        u = k[2][leg][1]
        if len(u) != 1:
            raise InternalError("projection applied to a non-primitive element", k)
        if is_minus(u[0]) == keep_minus:
            out.terms[k] = v
    return out


def factorize(x: Tensor, algs: Sequence, is_minus, leg: int | None = None, max_iter: int | None = None):
    """exp(x) = exp(x_-) exp(x_+) with x_- in the minus and x_+ in the plus sector.

    ``x`` must be primitive in its U-leg (index ``leg``, default the last)
    and of positive hbar-valuation.  Returns (x_-, x_+).
    """
    leg = x.nlegs - 1 if leg is None else leg
    E = exp_truncated(x, algs)
    Y = x.like()
    for _ in range((max_iter or x.K) + 1):
        W = log_truncated(exp_truncated(-Y, algs).mul(E, algs), algs)
        Wm = _project(W, True, is_minus, leg)
        if not Wm:
            return Y, _project(W, False, is_minus, leg)
        Y = log_truncated(exp_truncated(Y, algs).mul(exp_truncated(Wm, algs), algs), algs)
    raise InternalError("factorization did not converge within the hbar window")


class Twist:
    """F for the pair (r1, r2) with S-modes up to N (exact on S-weight <= N + 1)."""

    def __init__(self, r1: RMatrixInput, r2: RMatrixInput, K: int, N: int):
        self.r1, self.r2, self.K, self.N = r1, r2, K, N
        self.s1 = LoopSplitting(r1, K)
        self.s2 = LoopSplitting(r2, K)
        self.env = self.s2.env
        self.algs = [SYM, self.env]
        # Psi(J) is hbar^{-1} times a coefficient of Y, so Y is needed to hbar^{K+1}
        Z = Tensor(None, 2, 0, K + 1)
        for y in self.s1.minus_symbols(N):
            img = self.s2.from_standard(self.s1.to_standard(y))
            for g, v in self.s1.dual(y).items():
                for s, c in img.items():
                    add_into(Z.terms, ((), 1, (((g,), ()), ((), (s,)))), v * c)
        self.Z = Z
        self.Y, Xplus = factorize(Z, self.algs, self.s2.is_minus)
        self.Xplus = Xplus.truncate(K)
        self.F = exp_truncated(self.Xplus, self.algs)
        self.Finv = exp_truncated(-self.Xplus, self.algs)
        # the U-coefficient of y in Y is hbar Psi(dual(y)); invert with the pairing
        self.psi_gen: dict = {}
        for (z, h, (l1, l2)), c in self.Y.terms.items():
            (y,) = l2[1]
            n = -y[0] - 1
            for b in range(r2.lie.dim):
                f = (n, b, GSTAR)
                p = self.s2.pair_gen(f, y)
                if p:
                    t = self.psi_gen.setdefault(f, Tensor(None, 1, 0, K))
                    add_into(t.terms, ((), h - 1, ((l1[0], ()),)), c * p)

    # Psi: A(r2) -> A(r1)
    def psi_leg(self, leg) -> Tensor:
        s, u = leg
        cur = Tensor.unit(1, 0, self.K)
        for f in s:
            img = self.psi_gen.get(f)
            if img is None:
                raise InternalError("Psi needed beyond the computed S-window", f)
            cur = cur.mul(img, [SYM], self.K)
        if u:
            cur = cur.linear_map(lambda k: [((k[0], k[1], ((k[2][0][0], u),)), ONE)])
        return cur

    def psi(self, t: Tensor) -> Tensor:
        """Psi applied on every leg."""
        out = t
        for i in range(t.nlegs):
            out = _apply_leg(out, i, self.psi_leg, self.K)
        return out


def _apply_leg(t: Tensor, i: int, fn, K: int) -> Tensor:
    out = Tensor(None, t.nlegs, t.nz, K, t.zwin)
    for (z, h, legs), c in t.terms.items():
        for (z2, h2, (l,)), c2 in fn(legs[i]).terms.items():
            if h + h2 <= K:
                add_into(out.terms, (z, h + h2, legs[:i] + (l,) + legs[i + 1:]), c * c2)
    return out


def s_weight(legs) -> int:
    return sum(f[0] + 1 for l in legs for f in l[0])


def weight_filter(t: Tensor, W: int) -> Tensor:
    return t.filter(lambda k: s_weight(k[2]) <= W)


def twist_matrix(r1: RMatrixInput, r2: RMatrixInput, K: int = 2, N: int = 2) -> Tensor:
    return Twist(r1, r2, K, N).F


def _T_symbol(x):
    n, a, sec = x
    return ((n - 1, a, sec), Fraction(n)) if n > 0 else None


def T_on_tensor(t: Tensor, env: Enveloping) -> Tensor:
    """(T (x) 1 + 1 (x) T + ...) applied as a derivation on every leg."""
    out = t.like()
    for (z, h, legs), c in t.terms.items():
        for i, (s, u) in enumerate(legs):
            for j, f in enumerate(s):
                r = _T_symbol(f)
                if r:
                    ns = merge_sorted(s[:j] + s[j + 1:], (r[0],))
                    add_into(out.terms, (z, h, legs[:i] + ((ns, u),) + legs[i + 1:]), c * r[1])
            for j, x in enumerate(u):
                r = _T_symbol(x)
                if r:
                    for m, v in env.normal_order(u[:j] + (r[0],) + u[j + 1:]).items():
                        add_into(out.terms, (z, h, legs[:i] + ((s, m),) + legs[i + 1:]), c * r[1] * v)
    return out


def verify_twist(r1: RMatrixInput, r2: RMatrixInput, K: int = 2, N: int = 2, gens: Iterable | None = None,
                 corrupt=None) -> Report:
    """Psi-intertwining of brackets, (Psi (x) Psi) Delta_2 = F Delta_1 F^{-1}, the cocycle,
    F - F^{21} = hbar t mod hbar^2 and T-invariance of F (difference-only pairs).

    Identities are compared on terms of total S-weight <= N + 1, where the
    truncated F is exact.
    """
    tw = Twist(r1, r2, K, N + K)
    W = N + 1
    q1 = Quantization(tw.s1, K)
    q2 = Quantization(tw.s2, K)
    F, Finv = tw.F, tw.Finv
    if corrupt is not None:
        F = corrupt(F)
    A2 = [q1.A, q1.A]
    A3 = [q1.A] * 3
    gens = list(gens) if gens is not None else q2.generators(N)
    counts: dict = {}
    wit: list = []

    def record(name, g, t):
        counts[name] = counts.get(name, 0) + 1
        t = weight_filter(t, W)
        if t:
            wit.append({"check": name, "generator": q1.sym_json(g) if g else None,
                        "witness": q1.tensor_json(t)[:5]})

    # brackets: Psi([x, J]_2) = [x, Psi(J)]_1
    for x in q2.plus_symbols(N):
        for f in q2.s_symbols(N):
            lhs = tw.psi(q2.commutator(x, f))
            pf = tw.psi_leg(gen_leg(f))
            X = q1.element(x)
            rhs = q1.mul(X, pf) - q1.mul(pf, X)
            record("bracket", f, lhs - rhs)
    # coproducts
    for g in gens:
        lhs = tw.psi(q2.coproduct_gen(g))
        pg = tw.psi_leg(gen_leg(g))
        mid = q1.coproduct(pg)
        rhs = F.mul(mid, A2, K).mul(Finv, A2, K)
        record("coproduct", g, lhs - rhs)
    # cocycle F12 (Delta (x) 1)(F) = F23 (1 (x) Delta)(F)
    F12 = F.embed(3, (0, 1))
    F23 = F.embed(3, (1, 2))
    lhs = F12.mul(q1.apply_on_leg(F, 0, q1.coproduct_leg), A3, K)
    rhs = F23.mul(q1.apply_on_leg(F, 1, q1.coproduct_leg), A3, K)
    record("cocycle", None, lhs - rhs)
    # F - F21 = hbar t mod hbar^2
    d = (F - F.permute_legs((1, 0))).hpart(1)
    t = Tensor(None, 2, 0, K)
    for (z, (a, b)), v in lift_rho(r2).tail.items():
        add_into(t.terms, ((), 1, (gen_leg(a), gen_leg(b))), v)
    for (z, (a, b)), v in lift_rho(r1).tail.items():
        add_into(t.terms, ((), 1, (gen_leg(a), gen_leg(b))), -v)
    record("skew", None, d - t)
    # translation invariance
    if r1.difference_only and r2.difference_only:
        counts["translation"] = 1
        tt = weight_filter(T_on_tensor(F, q1.env), W - 1)
        if tt:
            wit.append({"check": "translation", "generator": None, "witness": q1.tensor_json(tt)[:5]})
    # F F^{-1} = 1
    one = F.mul(Finv, A2, K) - Tensor.unit(2, 0, K)
    record("inverse", None, one)
    return Report("twist identities", {"K": K, "N": N, "S-weight": W}, "formal", wit,
                  "pass" if not wit else "fail", checks={k: counts[k] for k in sorted(counts)})
