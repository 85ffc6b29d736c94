"""The divided-power pairing S(g*(O)) x U(g(r)), reconstruction and E_r.

A *splitting* describes U(p) = U(p_-) (x) U(p_+): which symbols are the
"minus" generators (dual to the S-side coordinates), their dual S-vectors,
and which minus monomials are needed for each windowed computation.  Three
splittings are provided:

* :class:`LoopSplitting` for gamma (minus = standard modes b_a t^{-n-1}),
* :class:`LoopSplitting` for a rational r (minus = r_{a,n}, sector R),
* :class:`FiniteSplitting` for a finite-dimensional matched pair.

The pairing uses the permanent convention
``<f_1...f_k, sym(v_1...v_k)> = sum_sigma prod <f_i, v_sigma(i)>`` and the
hbar bookkeeping of the coordinates ``hbar f``: the dual of ``sym(mu)`` is
``hbar^{|mu|} prod dual(mu_i) / alpha!``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .classical import RMatrixInput, Splitting
from .core import G, GSTAR, ONE, R, SECTOR_CODES, SECTOR_NAMES, ZERO, LieAlgebra, add_into, bracket_symbols
from .errors import LegTypeMismatch, NotDirectSum, NotSubalgebra, UnderdeterminedWindow
from .pbw import Enveloping, SymmetricAlgebra, Tensor, exp_truncated, merge_sorted, multiplicity_factorial

SYM = SymmetricAlgebra()


def permanent(rows: Sequence, cols: Sequence, entry) -> Fraction:
    n = len(rows)
    if n != len(cols):
        return ZERO
    if n == 0:
        return ONE

    @lru_cache(maxsize=None)
    def rec(i: int, used: int) -> Fraction:
        if i == n:
            return ONE
        tot = ZERO
        for j in range(n):
            if not used >> j & 1:
                e = entry(rows[i], cols[j])
                if e:
                    tot += e * rec(i + 1, used | 1 << j)
        return tot

    return rec(0, 0)


class BaseSplitting:
    """Common pairing machinery; subclasses define symbols and windows."""

    env: Enveloping
    K: int

    def is_minus(self, s) -> bool:
        raise NotImplementedError

    def dual(self, s) -> dict:
        raise NotImplementedError

    def pair_gen(self, f, s) -> Fraction:
        raise NotImplementedError

    # pairing ----------------------------------------------------------
    def pair_sym(self, fmono: tuple, mu: tuple) -> Fraction:
        return permanent(fmono, mu, self.pair_gen)

    def pair(self, fmono: tuple, A: Mapping) -> Fraction:
        """<f, A> for an S-monomial f and a U(p_-) element A = {pbw mono: c}."""
        tot = ZERO
        for mu, c in self.env.element_to_sym(A).items():
            if len(mu) == len(fmono):
                tot += c * self.pair_sym(fmono, mu)
        return tot

    def dual_mono(self, mu: tuple) -> dict:
        """prod dual(mu_i) / alpha! as {S-monomial: coeff} (no hbar)."""
        cur = {(): ONE}
        for s in mu:
            nxt: dict = {}
            for m, c in cur.items():
                for g, v in self.dual(s).items():
                    add_into(nxt, merge_sorted(m, (g,)), c * v)
            cur = nxt
        w = Fraction(1, multiplicity_factorial(mu))
        return {m: c * w for m, c in cur.items()}

    def p_minus(self, x: Mapping) -> dict:
        return {s: v for s, v in x.items() if self.is_minus(s)}

    def p_plus(self, x: Mapping) -> dict:
        return {s: v for s, v in x.items() if not self.is_minus(s)}


def _multisets(symbols: Sequence, max_deg: int, weight=None, wmax=None, min_deg: int = 0):
    """Sorted multisets from symbols with degree and total weight bounds."""
    symbols = sorted(symbols)
    out = []

    def rec(start, cur, w):
        if len(cur) >= min_deg:
            out.append(tuple(cur))
        if len(cur) == max_deg:
            return
        for i in range(start, len(symbols)):
            s = symbols[i]
            nw = w + (weight(s) if weight else 0)
            if wmax is not None and nw > wmax:
                continue
            cur.append(s)
            rec(i, cur, nw)
            cur.pop()

    rec(0, [], 0)
    return out


def _splits(omega: tuple) -> list:
    """All ordered pairs (mu, nu) of sub-multisets with mu + nu = omega."""
    counts: dict = {}
    for s in omega:
        counts[s] = counts.get(s, 0) + 1
    items = sorted(counts.items())
    out = [((), ())]
    for s, k in items:
        out = [(mu + (s,) * i, nu + (s,) * (k - i)) for mu, nu in out for i in range(k + 1)]
    return out


class LoopSplitting(BaseSplitting):
    """U(g((t))) = U(g(r)) (x) U(g[t]) for gamma or a rational r-matrix."""

    def __init__(self, r: RMatrixInput, K: int):
        self.r = r
        self.lie = r.lie
        self.K = K
        self.gamma = r.is_gamma()
        self.classical = Splitting(r)
        self.D = max((i for (_, i, _, _) in r.tail), default=0)
        self.Dn = max((j for (_, _, _, j) in r.tail), default=0)
        lie = self.lie
        if self.gamma:
            self.env = Enveloping(lambda x, y: bracket_symbols(lie, x, y))
        else:
            self.env = Enveloping(self._r_bracket)

    # the r-basis bracket
    def to_standard(self, s) -> dict:
        n, a, sec = s
        if sec == R and not self.gamma:
            return self.classical.r_vector(a, -n - 1)
        return {s: ONE}

    def from_standard(self, x: Mapping) -> dict:
        if self.gamma:
            return {k: v for k, v in x.items() if v}
        coeffs, plus = self.classical.decompose(x)
        out = dict(plus)
        for (a, m), v in coeffs.items():
            add_into(out, (-m - 1, a, R), v)
        return out

    def _r_bracket(self, x, y) -> dict:
        lie = self.lie
        acc: dict = {}
        for sx, cx in self.to_standard(x).items():
            for sy, cy in self.to_standard(y).items():
                for s, v in bracket_symbols(lie, sx, sy).items():
                    add_into(acc, s, cx * cy * v)
        return self.from_standard(acc)

    def is_minus(self, s) -> bool:
        return s[0] < 0

    def minus_symbol(self, a: int, n: int):
        return (-n - 1, a, G if self.gamma else R)

    def dual(self, s) -> dict:
        n = -s[0] - 1
        if self.gamma:
            return {(n, b, GSTAR): v for b, v in self.lie.dual_vector(s[1]).items()}
        return {(n, s[1], GSTAR): ONE}

    def pair_gen(self, f, s) -> Fraction:
        n = -s[0] - 1
        if f[0] != n:
            return ZERO
        if self.gamma:
            return self.lie.kappa0[f[1]][s[1]]
        return ONE if f[1] == s[1] else ZERO

    def minus_symbols(self, max_index: int) -> list:
        return [self.minus_symbol(a, n) for n in range(max_index + 1) for a in range(self.lie.dim)]

    @staticmethod
    def weight(s) -> int:
        return -s[0]

    # windows: which minus monomials each computation needs
    def phi_monomials(self, x) -> list:
        k = x[0]
        if self.gamma:
            return _multisets(self.minus_symbols(k), self.K, self.weight, k, 1) if k > 0 else []
        top = k + self.K * self.D + self.Dn
        return _multisets(self.minus_symbols(top), self.K, None, None, 1)

    def coproduct_pairs(self, f) -> list:
        m = f[0]
        if self.gamma:
            mus = _multisets(self.minus_symbols(m), self.K + 1, self.weight, m + 1)
            by_w: dict = {}
            for mu in mus:
                by_w.setdefault(sum(self.weight(s) for s in mu), []).append(mu)
            out = []
            for mu in mus:
                w = sum(self.weight(s) for s in mu)
                for nu in by_w.get(m + 1 - w, []):
                    if len(mu) + len(nu) <= self.K + 1:
                        out.append((mu, nu))
            return out
        top = m + self.K * self.D
        out = []
        for omega in _multisets(self.minus_symbols(top), self.K + 1, None, None, 1):
            if self._degree_reachable(omega, m + 1):
                out.extend(_splits(omega))
        return out

    def _degree_reachable(self, omega: tuple, target: int) -> bool:
        """Can the t-degree -target be hit by picking one component per factor?

        r_{a,n} has its principal component in t-degree -n-1 and, when a tail
        is attached at index n, components in degrees 0..D.  The linear part
        of a product in U(g(r)) is computed inside the graded U(g((t))), so a
        product whose components can never reach degree -target pairs to zero
        with every J_{target-1}.
        """
        tailed = {(b, j) for (b, j) in self.r.tail_indices()}
        reach = {(0, 0)}  # (principal weight, number of tail picks)
        for s in omega:
            n = -s[0] - 1
            nxt = set()
            for w, t in reach:
                nxt.add((w + n + 1, t))
                if (s[1], n) in tailed:
                    nxt.add((w, t + 1))
            reach = nxt
        return any(target <= w <= target + self.D * t for w, t in reach)

    def comm_monomials(self, x, f) -> list:
        k, m = x[0], f[0]
        if self.gamma:
            W = k + m + 1
            return [mu for mu in _multisets(self.minus_symbols(W - 1), self.K + 1, self.weight, W, 1)
                    if sum(self.weight(s) for s in mu) == W]
        top = m + k + (self.K + 1) * self.D + self.Dn
        return _multisets(self.minus_symbols(top), self.K + 1, None, None, 1)

    def describe(self) -> dict:
        return {"kind": "gamma" if self.gamma else "rational", "tail": self.r.to_json()["tail"]}


class FiniteSplitting(BaseSplitting):
    """A finite-dimensional matched pair p = p_+ + p_- given by basis vectors.

    ``plus`` and ``minus`` are lists of coordinate vectors (dicts label ->
    coeff) in the basis of ``lie``.  Internally minus generator i is symbol
    ``(-1, i, R)``, plus generator j is ``(0, j, G)`` and the S-coordinate
    dual to minus i is ``(0, i, GSTAR)``.
    """

    def __init__(self, lie: LieAlgebra, plus: list, minus: list, K: int,
                 plus_names=None, minus_names=None):
        self.lie = lie
        self.K = K
        self.plus = [{a: Fraction(v) for a, v in vec.items()} for vec in plus]
        self.minus = [{a: Fraction(v) for a, v in vec.items()} for vec in minus]
        self.plus_names = plus_names or [f"p{j}" for j in range(len(plus))]
        self.minus_names = minus_names or [f"m{i}" for i in range(len(minus))]
        basis = [(-1, i, R) for i in range(len(self.minus))] + [(0, j, G) for j in range(len(self.plus))]
        vecs = self.minus + self.plus
        if len(vecs) != lie.dim:
            raise NotDirectSum("dimensions of the summands do not add up", len(vecs))
        from .core import _mat_inverse
        mat = [[vec.get(a, ZERO) for vec in vecs] for a in range(lie.dim)]
        inv = _mat_inverse(mat)
        if inv is None:
            raise NotDirectSum("summands intersect", vecs)
        self._basis = basis
        self._coords = inv  # coords = inv @ vector
        self.env = Enveloping(self._bracket)
        for part, tag in ((self.plus, G), (self.minus, R)):
            for i, u in enumerate(part):
                for j, w in enumerate(part):
                    br = self._coord(lie.bracket_vec(u, w))
                    if any((s[2] != tag) for s in br):
                        raise NotSubalgebra("summand is not closed under the bracket", (tag, i, j))

    def _coord(self, vec: Mapping) -> dict:
        out: dict = {}
        for k, s in enumerate(self._basis):
            v = sum((self._coords[k][a] * c for a, c in vec.items()), ZERO)
            if v:
                out[s] = v
        return out

    def vector(self, s) -> dict:
        return self.minus[s[1]] if s[2] == R else self.plus[s[1]]

    def _bracket(self, x, y) -> dict:
        return self._coord(self.lie.bracket_vec(self.vector(x), self.vector(y)))

    def is_minus(self, s) -> bool:
        return s[2] == R

    def dual(self, s) -> dict:
        return {(0, s[1], GSTAR): ONE}

    def pair_gen(self, f, s) -> Fraction:
        return ONE if f[1] == s[1] else ZERO

    def minus_symbols(self, max_index: int = 0) -> list:
        return [(-1, i, R) for i in range(len(self.minus))]

    def phi_monomials(self, x) -> list:
        return _multisets(self.minus_symbols(), self.K, None, None, 1)

    def coproduct_pairs(self, f) -> list:
        mus = _multisets(self.minus_symbols(), self.K + 1)
        return [(mu, nu) for mu in mus for nu in mus if 1 <= len(mu) + len(nu) <= self.K + 1]

    def comm_monomials(self, x, f) -> list:
        return _multisets(self.minus_symbols(), self.K + 1, None, None, 1)

    def name(self, s) -> str:
        if s[2] == GSTAR:
            return self.minus_names[s[1]] + "^v"
        if s[2] == R:
            return self.minus_names[s[1]]
        return self.plus_names[s[1]]

    def describe(self) -> dict:
        return {"kind": "finite", "plus": self.plus_names, "minus": self.minus_names}


# --- user-facing operations -------------------------------------------------------

def pair(split: BaseSplitting, f: Mapping, A: Mapping) -> Fraction:
    """<f, A> for f = {S-monomial: c} and A = {U(p_-) PBW monomial: c}."""
    return sum((c * split.pair(m, A) for m, c in f.items()), ZERO)


def tensor_as_map(split: BaseSplitting, t: Tensor, A: Mapping) -> Tensor:
    """The map A -> sum <leg1, A> leg2 (first leg S-side, second U-side)."""
    if t.nlegs != 2:
        raise LegTypeMismatch("tensor_as_map needs a two-leg tensor")
    out = Tensor(None, 1, t.nz, t.K, t.zwin)
    for (z, h, (l1, l2)), c in t.terms.items():
        if l1[1]:
            raise LegTypeMismatch("first leg must be S-side", l1)
        v = split.pair(l1[0], A)
        if v:
            add_into(out.terms, (z, h, (l2,)), c * v)
    return out


def E_matrix(split: BaseSplitting, N: int, K: int | None = None) -> Tensor:
    """E_r = exp(hbar sum dual(y) (x) y) over minus generators of index <= N."""
    K = split.K if K is None else K
    X = Tensor(None, 2, 0, K)
    for y in split.minus_symbols(N):
        for g, v in split.dual(y).items():
            add_into(X.terms, ((), 1, (((g,), ()), ((), (y,)))), v)
    return exp_truncated(X, [SYM, split.env])


def reconstruct(split: BaseSplitting, values: Mapping, s_legs: int = 1, hbar_weight: bool = True,
                required: Iterable | None = None, K: int | None = None) -> Tensor:
    """Tensor sum_mu hbar^{|mu|} dual(mu) (x) values[mu].

    With ``s_legs == 1`` the keys of ``values`` are sym-basis multisets mu;
    with ``s_legs == 2`` they are pairs (mu, nu) and the output has two
    S-legs in front.  Values are Tensors (their legs are appended).
    ``required`` lists the keys the window needs; a missing one raises
    UnderdeterminedWindow.
    """
    K = split.K if K is None else K
    if required is not None:
        missing = [k for k in required if k not in values]
        if missing:
            raise UnderdeterminedWindow("values missing for required monomials", missing[:5])
    first = next(iter(values.values()), None)
    extra = first.nlegs if first is not None else 0
    out = Tensor(None, s_legs + extra, 0, K)
    for key, val in values.items():
        mus = key if s_legs == 2 else (key,)
        duals = [split.dual_mono(mu) for mu in mus]
        hw = sum(len(mu) for mu in mus) if hbar_weight else 0
        legsets = [((), 1)]
        for d in duals:
            legsets = [(prev + ((m, ()),), c * v) for prev, c in legsets for m, v in d.items()]
        for (z, h, legs), c in val.terms.items():
            if h + hw > K:
                continue
            for prefix, cp in legsets:
                add_into(out.terms, (z, h + hw, prefix + legs), c * cp)
    return out


# --- serialization -----------------------------------------------------------------

def sym_to_json(s) -> list:
    n, a, sec = s
    if sec == R:
        return ["r", a + 1, -n - 1]
    return [SECTOR_NAMES[sec], a + 1, n]


def sym_from_json(x) -> tuple:
    sec, a, n = x
    if sec == "r":
        return (-int(n) - 1, int(a) - 1, R)
    return (int(n), int(a) - 1, SECTOR_CODES[sec])


def tensor_to_json(t: Tensor) -> list | dict:
    """TypedTensor / TensorSeries JSON with exact fractions, deterministic order."""
    groups: dict = {}
    for (z, h, legs), c in t.terms.items():
        key = (z, tuple((tuple(tuple(sym_to_json(s)) for s in l[0]), tuple(tuple(sym_to_json(s)) for s in l[1])) for l in legs))
        groups.setdefault(key, []).append([h, c.numerator, c.denominator])

    def entry(legs, hb):
        return {"legs": [[list(s) for s in l[0]] + [list(s) for s in l[1]] for l in legs],
                "hbar": sorted(hb)}

    if t.nz == 0:
        return [entry(k[1], v) for k, v in sorted(groups.items(), key=lambda kv: repr(kv[0]))]
    terms: dict = {}
    for k, v in sorted(groups.items(), key=lambda kv: repr(kv[0])):
        terms.setdefault(k[0], []).append(entry(k[1], v))
    return {"domain": "z=inf", "terms": [{"zpow": list(z) if len(z) > 1 else z[0], "tensor": terms[z]}
                                          for z in sorted(terms)]}


def tensor_from_json(data, K: int = 8) -> Tensor:
    def leg_from(monomial):
        syms = [sym_from_json(x) for x in monomial]
        s = tuple(sorted(x for x in syms if x[2] == GSTAR))
        u = tuple(x for x in syms if x[2] != GSTAR)
        return (s, u)

    if isinstance(data, dict):
        entries = [(t["zpow"], e) for t in data["terms"] for e in t["tensor"]]
    else:
        entries = [(None, e) for e in data]
    t = None
    for z, e in entries:
        legs = tuple(leg_from(m) for m in e["legs"])
        zt = () if z is None else (tuple(z) if isinstance(z, list) else (z,))
        if t is None:
            t = Tensor(None, len(legs), len(zt), K)
        for h, num, den in e["hbar"]:
            add_into(t.terms, (zt, h, legs), Fraction(num, den))
    return t if t is not None else Tensor()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
