"""PBW straightening, sparse tensors, truncated exp/log/BCH, shuffle coproduct.

A *leg monomial* is a pair ``(s, u)``: ``s`` a sorted tuple of commuting
S-side symbols and ``u`` a PBW-ordered tuple of U-side symbols.  Pure
enveloping-algebra monomials use ``s = ()``.  A :class:`Tensor` maps keys
``(z, h, legs)`` to rationals, where ``z`` is a tuple of exponents of the
spectral variables (possibly empty), ``h`` the hbar power and ``legs`` a
tuple of leg monomials.  Leg multiplication is delegated to an algebra
object exposing ``leg_mul(l1, l2) -> list[(h, leg, coeff)]``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Callable, Iterable, Sequence

from .core import ONE, ZERO, LieAlgebra, add_into, bracket_symbols
from .errors import BadUnitPart, NotTopologicallyNilpotent, WindowOverflow

Mono = tuple
Leg = tuple  # (s, u)
UNIT_LEG: Leg = ((), ())


class Enveloping:
    """U(L) for a Lie algebra given by a bracket on basis symbols.

    Normal forms use the natural tuple order of symbols.  All straightening
    results are memoized.
    """

    def __init__(self, bracket: Callable[[tuple, tuple], dict], window: tuple[int, int] | None = None):
        self._raw_bracket = bracket
        self.window = window
        self._br: dict = {}
        self._ins: dict = {}
        self._mm: dict = {}
        self._sym: dict = {}
        self._tosym: dict = {}
        self._lin: dict = {}

    def bracket(self, x, y) -> dict:
        key = (x, y)
        r = self._br.get(key)
        if r is None:
            r = {k: v for k, v in self._raw_bracket(x, y).items() if v}
            if self.window is not None:
                for s in r:
                    if not self.window[0] <= s[0] <= self.window[1]:
                        raise WindowOverflow(f"loop degree {s[0]} outside {self.window}", s)
            self._br[key] = r
        return r

    def insert(self, x, mono: Mono) -> dict:
        """x * mono with mono already normal."""
        if not mono or x <= mono[0]:
            return {(x,) + mono: ONE}
        key = (x, mono)
        r = self._ins.get(key)
        if r is not None:
            return r
        y, rest = mono[0], mono[1:]
        out: dict = {}
        # x y rest = y (x rest) + [x, y] rest
        for m, c in self.insert(x, rest).items():
            for m2, c2 in self.insert(y, m).items():
                add_into(out, m2, c * c2)
        for z, cz in self.bracket(x, y).items():
            for m, c in self.insert(z, rest).items():
                add_into(out, m, c * cz)
        self._ins[key] = out
        return out

    def mul_mono(self, m1: Mono, m2: Mono) -> dict:
        if not m1:
            return {m2: ONE}
        if not m2:
            return {m1: ONE}
        key = (m1, m2)
        r = self._mm.get(key)
        if r is not None:
            return r
        cur = {m2: ONE}
        for x in reversed(m1):
            nxt: dict = {}
            for m, c in cur.items():
                for m3, c3 in self.insert(x, m).items():
                    add_into(nxt, m3, c * c3)
            cur = nxt
        self._mm[key] = cur
        return cur

    def normal_order(self, word: Sequence) -> dict:
        cur = {(): ONE}
        for x in reversed(tuple(word)):
            nxt: dict = {}
            for m, c in cur.items():
                for m3, c3 in self.insert(x, m).items():
                    add_into(nxt, m3, c * c3)
            cur = nxt
        return cur

    def multiply(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for m1, c1 in A.items():
            for m2, c2 in B.items():
                for m, c in self.mul_mono(m1, m2).items():
                    add_into(out, m, c * c1 * c2)
        return out

    def leg_mul(self, l1: Leg, l2: Leg) -> list:
        return [(0, ((), m), c) for m, c in self.mul_mono(l1[1], l2[1]).items()]

    # symmetrization ---------------------------------------------------
    def sym(self, mu: Mono) -> dict:
        """Normal form of the symmetrized product of the multiset mu."""
        r = self._sym.get(mu)
        if r is not None:
            return r
        out: dict = {}
        perms = set(permutations(mu))
        w = Fraction(1, len(perms))
        for p in perms:
            for m, c in self.normal_order(p).items():
                add_into(out, m, c * w)
        self._sym[mu] = out
        return out

    def to_sym(self, mono: Mono) -> dict:
        """Expand an ordered PBW monomial in the symmetrized basis.

        Keys of the result are sorted multisets mu standing for sym(mu).
        """
        if len(mono) <= 1:
            return {mono: ONE}
        r = self._tosym.get(mono)
        if r is not None:
            return r
        key = tuple(sorted(mono))
        if key != mono:
            out = self.element_to_sym(self.normal_order(mono))
            self._tosym[mono] = out
            return out
        out = {key: ONE}
        for m, c in self.sym(key).items():
            if m == mono:
                continue
            for nu, c2 in self.to_sym(m).items():
                add_into(out, nu, -c * c2)
        # sym(key) has leading coefficient 1 on the sorted word
        lead = self.sym(key).get(mono, ZERO)
        if lead != 1:
            raise AssertionError("symmetrization lost its leading term")
        self._tosym[mono] = out
        return out

    def element_to_sym(self, A: dict) -> dict:
        out: dict = {}
        for m, c in A.items():
            for mu, c2 in self.to_sym(m).items():
                add_into(out, mu, c * c2)
        return out

    def linear_part_mono(self, mono: Mono) -> dict:
        """Degree-one part of the symmetrized expansion of a monomial."""
        if len(mono) <= 1:
            return {mono[0]: ONE} if mono else {}
        r = self._lin.get(mono)
        if r is not None:
            return r
        out: dict = {}
        key = tuple(sorted(mono))
        if key != mono:
            for m, c in self.normal_order(mono).items():
                for s, v in self.linear_part_mono(m).items():
                    add_into(out, s, c * v)
        else:
            for m, c in self.sym(key).items():
                if m != mono:
                    for s, v in self.linear_part_mono(m).items():
                        add_into(out, s, -c * v)
        self._lin[mono] = out
        return out

    def linear_part(self, A: dict) -> dict:
        out: dict = {}
        for m, c in A.items():
            for s, v in self.linear_part_mono(m).items():
                add_into(out, s, c * v)
        return out

    def cache_size(self) -> int:
        return len(self._ins) + len(self._mm)


def loop_enveloping(lie: LieAlgebra, window: tuple[int, int] | None = None) -> Enveloping:
    """U(g((t))) on standard modes (n, a, G)."""
    return Enveloping(lambda x, y: bracket_symbols(lie, x, y), window)


def naive_normal_order(bracket: Callable, word: Sequence) -> dict:
    """Reference straightening by repeated adjacent swaps (test oracle)."""
    todo = {tuple(word): ONE}
    done: dict = {}
    while todo:
        w, c = todo.popitem()
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                sw = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                add_into(todo, sw, c)
                for z, cz in bracket(w[i], w[i + 1]).items():
                    add_into(todo, w[:i] + (z,) + w[i + 2:], c * cz)
                break
        else:
            add_into(done, w, c)
    return done


def merge_sorted(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class SymmetricAlgebra:
    """Polynomial (commutative) algebra on S-side symbols."""

    def leg_mul(self, l1: Leg, l2: Leg) -> list:
        return [(0, (merge_sorted(l1[0], l2[0]), ()), ONE)]


class Tensor:
    """Sparse sum of hbar^h z^z (leg_1 (x) ... (x) leg_L) with rational coefficients.

    ``K`` caps the hbar power.  ``zwin`` optionally bounds the z exponents
    (tuple of (lo, hi) per variable, either side may be None).
    """

    __slots__ = ("terms", "nlegs", "nz", "K", "zwin")

    def __init__(self, terms=None, nlegs: int = 1, nz: int = 0, K: int = 8, zwin=None):
        self.terms: dict = {}
        self.nlegs = nlegs
        self.nz = nz
        self.K = K
        self.zwin = zwin
        if terms:
            for k, v in terms.items():
                if k[1] <= K and self._in_window(k[0]):
                    add_into(self.terms, k, Fraction(v))

    def _in_window(self, z) -> bool:
        if self.zwin is None:
            return True
        for e, (lo, hi) in zip(z, self.zwin):
            if (lo is not None and e < lo) or (hi is not None and e > hi):
                return False
        return True

    # construction helpers
    @classmethod
    def unit(cls, nlegs=1, nz=0, K=8, zwin=None) -> "Tensor":
        return cls({((0,) * nz, 0, (UNIT_LEG,) * nlegs): ONE}, nlegs, nz, K, zwin)

    @classmethod
    def mono(cls, legs, h=0, c=1, z=None, K=8, nz=0, zwin=None) -> "Tensor":
        z = z if z is not None else (0,) * nz
        return cls({(tuple(z), h, tuple(legs)): Fraction(c)}, len(legs), len(z), K, zwin)

    def like(self, terms=None) -> "Tensor":
        t = Tensor(None, self.nlegs, self.nz, self.K, self.zwin)
        if terms:
            t.terms = {k: v for k, v in terms.items() if v}
        return t

    def copy(self) -> "Tensor":
        return self.like(dict(self.terms))

    # linear structure
    def __add__(self, other: "Tensor") -> "Tensor":
        out = dict(self.terms)
        for k, v in other.terms.items():
            add_into(out, k, v)
        t = self.like(out)
        return t

    def __sub__(self, other: "Tensor") -> "Tensor":
        out = dict(self.terms)
        for k, v in other.terms.items():
            add_into(out, k, -v)
        return self.like(out)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Tensor":
        c = Fraction(c)
        return self.like({k: v * c for k, v in self.terms.items()} if c else {})

    def iadd(self, other: "Tensor", c=ONE) -> "Tensor":
        for k, v in other.terms.items():
            add_into(self.terms, k, v * c)
        return self

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Tensor({len(self.terms)} terms, legs={self.nlegs}, nz={self.nz}, K={self.K})"

    def items(self):
        return self.terms.items()

    # filters and maps
    def truncate(self, K: int) -> "Tensor":
        t = Tensor(None, self.nlegs, self.nz, K, self.zwin)
        t.terms = {k: v for k, v in self.terms.items() if k[1] <= K}
        return t

    def with_window(self, zwin) -> "Tensor":
        t = Tensor(None, self.nlegs, self.nz, self.K, zwin)
        t.terms = {k: v for k, v in self.terms.items() if t._in_window(k[0])}
        return t

    def filter(self, pred) -> "Tensor":
        return self.like({k: v for k, v in self.terms.items() if pred(k)})

    def hpart(self, h: int) -> "Tensor":
        return self.filter(lambda k: k[1] == h)

    def max_h(self) -> int:
        return max((k[1] for k in self.terms), default=-1)

    def min_h(self) -> int | None:
        return min((k[1] for k in self.terms), default=None)

    def permute_legs(self, perm: Sequence[int]) -> "Tensor":
        """New leg i is old leg perm[i]."""
        t = Tensor(None, len(perm), self.nz, self.K, self.zwin)
        for (z, h, legs), v in self.terms.items():
            add_into(t.terms, (z, h, tuple(legs[p] for p in perm)), v)
        return t

    def embed(self, nlegs: int, positions: Sequence[int]) -> "Tensor":
        """Place the legs at the given positions of an nlegs tensor, units elsewhere."""
        t = Tensor(None, nlegs, self.nz, self.K, self.zwin)
        for (z, h, legs), v in self.terms.items():
            new = [UNIT_LEG] * nlegs
            for p, l in zip(positions, legs):
                new[p] = l
            add_into(t.terms, (z, h, tuple(new)), v)
        return t

    def map_z(self, f, nz: int | None = None, zwin=None) -> "Tensor":
        """Relabel z exponents with f(z) (a tuple)."""
        t = Tensor(None, self.nlegs, self.nz if nz is None else nz, self.K, zwin)
        for (z, h, legs), v in self.terms.items():
            nzz = f(z)
            if t._in_window(nzz):
                add_into(t.terms, (nzz, h, legs), v)
        return t

    def linear_map(self, f, nlegs: int | None = None) -> "Tensor":
        """Apply f(key) -> iterable of (key', coeff) linearly."""
        t = Tensor(None, self.nlegs if nlegs is None else nlegs, self.nz, self.K, self.zwin)
        for k, v in self.terms.items():
            for k2, c2 in f(k):
                if k2[1] <= self.K and t._in_window(k2[0]):
                    add_into(t.terms, k2, v * c2)
        return t

    def zparts(self) -> dict:
        out: dict = {}
        for (z, h, legs), v in self.terms.items():
            out.setdefault(z, {})[(h, legs)] = v
        return out

    # multiplication
    def mul(self, other: "Tensor", algs: Sequence, K: int | None = None) -> "Tensor":
        K = min(self.K, other.K) if K is None else K
        zwin = self.zwin if self.zwin is not None else other.zwin
        out = Tensor(None, self.nlegs, max(self.nz, other.nz), K, zwin)
        acc = out.terms
        nl = self.nlegs
        for (z1, h1, legs1), c1 in self.terms.items():
            for (z2, h2, legs2), c2 in other.terms.items():
                h0 = h1 + h2
                if h0 > K:
                    continue
                z = tuple(a + b for a, b in zip(z1, z2)) if z1 else z2
                if zwin is not None and not out._in_window(z):
                    continue
                partial = [(h0, (), c1 * c2)]
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

    def power(self, n: int, algs) -> "Tensor":
        res = Tensor.unit(self.nlegs, self.nz, self.K, self.zwin)
        for _ in range(n):
            res = res.mul(self, algs)
        return res

    def unit_part(self) -> Fraction:
        return self.terms.get(((0,) * self.nz, 0, (UNIT_LEG,) * self.nlegs), ZERO)


def _require_positive_valuation(x: Tensor):
    for (z, h, legs), v in x.terms.items():
        if h == 0:
            raise NotTopologicallyNilpotent("exponent has a nonzero hbar^0 part", (z, legs))


def exp_truncated(x: Tensor, algs) -> Tensor:
    """sum_{n <= K} x^n / n! for x of positive hbar-valuation."""
    _require_positive_valuation(x)
    res = Tensor.unit(x.nlegs, x.nz, x.K, x.zwin)
    term = Tensor.unit(x.nlegs, x.nz, x.K, x.zwin)
    for n in range(1, x.K + 1):
        term = term.mul(x, algs).scale(Fraction(1, n))
        if not term:
            break
        res = res + term
    return res


def log_truncated(A: Tensor, algs) -> Tensor:
    """log of A = 1 + (positive hbar-valuation)."""
    unit = Tensor.unit(A.nlegs, A.nz, A.K, A.zwin)
    y = A - unit
    for (z, h, legs), v in y.terms.items():
        if h == 0:
            raise BadUnitPart("hbar^0 part of the argument is not the unit", (z, legs, v))
    res = A.like()
    term = unit
    for n in range(1, A.K + 1):
        term = term.mul(y, algs)
        if not term:
            break
        res = res + term.scale(Fraction((-1) ** (n + 1), n))
    return res


def bch(x: Tensor, y: Tensor, algs) -> Tensor:
    """H(x, y) = log(exp(x) exp(y))."""
    return log_truncated(exp_truncated(x, algs).mul(exp_truncated(y, algs), algs), algs)


def inverse_truncated(A: Tensor, algs) -> Tensor:
    """Inverse of A = c(1 + hbar-small) by the geometric series."""
    c = A.unit_part()
    unit = Tensor.unit(A.nlegs, A.nz, A.K, A.zwin)
    y = A.scale(1 / c) - unit
    for (z, h, legs), v in y.terms.items():
        if h == 0:
            raise BadUnitPart("hbar^0 part is not a multiple of the unit", (z, legs, v))
    res = unit
    term = unit
    for _ in range(A.K):
        term = term.mul(y, algs).scale(-1)
        if not term:
            break
        res = res + term
    return res.scale(1 / c)


def coproduct_U(A: Tensor) -> Tensor:
    """Cocommutative shuffle coproduct on a one-leg U-element."""
    if A.nlegs != 1:
        raise ValueError("coproduct_U expects a one-leg element")
    out = Tensor(None, 2, A.nz, A.K, A.zwin)
    for (z, h, legs), v in A.terms.items():
        (s, u), = legs
        if s:
            raise ValueError("coproduct_U expects U-side legs")
        for l, r, c in shuffle_split(u):
            add_into(out.terms, (z, h, (((), l), ((), r))), v * c)
    return out


def shuffle_split(u: Mono) -> list:
    """All (sub-word, complement) splits of a PBW word, with multiplicity."""
    n = len(u)
    acc: dict = {}
    for k in range(n + 1):
        for idx in combinations(range(n), k):
            left = tuple(u[i] for i in idx)
            right = tuple(u[i] for i in range(n) if i not in idx)
            add_into(acc, (left, right), ONE)
    return [(l, r, c) for (l, r), c in acc.items()]


def multiplicity_factorial(mu: Mono) -> int:
    """alpha! for the multiset mu."""
    out = 1
    i = 0
    while i < len(mu):
        j = i
        while j < len(mu) and mu[j] == mu[i]:
            j += 1
        out *= factorial(j - i)
        i = j
    return out


def u_element(A: dict, h: int = 0, K: int = 8) -> Tensor:
    """Wrap a U-element dict {mono: coeff} as a one-leg Tensor."""
    return Tensor({((), h, (((), m),)): c for m, c in A.items()}, 1, 0, K)


def normal_order(env: Enveloping, word: Sequence) -> dict:
    return env.normal_order(word)


def multiply(env, A: dict, B: dict) -> dict:
    """Product of two U-elements ({mono: coeff}); symmetric mode if env is None."""
    if env is None:
        out: dict = {}
        for m1, c1 in A.items():
            for m2, c2 in B.items():
                add_into(out, merge_sorted(m1, m2), c1 * c2)
        return out
    return env.multiply(A, B)
