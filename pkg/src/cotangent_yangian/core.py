"""Scalars, the Lie algebras g and d = T*g, loop modes, and the derivation T.

Mode symbols are plain tuples ``(n, a, sector)``:

* ``sector == G``     the mode ``b_a t^n`` of g((t)),
* ``sector == GSTAR`` the mode ``eps b_a t^n`` of the abelian ideal eps g((t)),
* ``sector == R``     a splitting generator ``r_{a,n}`` (its tuple carries ``-n-1``
  in the loop slot so that it sorts with the negative modes).

Tuple order is the global PBW order: loop degree first, then label, then
sector.  Labels are 0-based internally; JSON files use 1-based integers or
label names.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FormDegenerate, FormNotInvariant, JacobiViolation, WindowOverflow

G, GSTAR, R = 0, 1, 2
SECTOR_NAMES = {G: "g", GSTAR: "g*", R: "r"}
SECTOR_CODES = {v: k for k, v in SECTOR_NAMES.items()}

FIXTURES = Path(__file__).parent / "fixtures"

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(num, den=1) -> Fraction:
    return Fraction(num, den)


def fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def add_into(target: dict, key, value) -> None:
    """target[key] += value, dropping exact zeros."""
    v = target.get(key, ZERO) + value
    if v:
        target[key] = v
    else:
        target.pop(key, None)


class HPoly:
    """Truncated polynomial in hbar with rational coefficients."""

    __slots__ = ("coeffs", "K")

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None, K: int = 8):
        self.K = K
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            if k > K:
                continue
            if k < 0:
                raise ValueError("negative hbar power")
            c = Fraction(c)
            if c:
                self.coeffs[k] = c

    @classmethod
    def const(cls, c, K: int = 8) -> "HPoly":
        return cls({0: Fraction(c)}, K)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            add_into(out, k, c)
        return HPoly(out, min(self.K, other.K))

    __radd__ = __add__

    def __neg__(self):
        return HPoly({k: -c for k, c in self.coeffs.items()}, self.K)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        K = min(self.K, other.K)
        out: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                if k1 + k2 <= K:
                    add_into(out, k1 + k2, c1 * c2)
        return HPoly(out, K)

    __rmul__ = __mul__

    def _coerce(self, other) -> "HPoly":
        if isinstance(other, HPoly):
            return other
        return HPoly.const(other, self.K)

    def __eq__(self, other):
        other = self._coerce(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def evaluate(self, xi) -> Fraction:
        xi = Fraction(xi)
        return sum((c * xi**k for k, c in self.coeffs.items()), ZERO)

    def valuation(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def to_json(self) -> list:
        return [[k, c.numerator, c.denominator] for k, c in sorted(self.coeffs.items())]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{fmt_frac(c)}*h^{k}" for k, c in sorted(self.coeffs.items()))


def _parse_label(raw, labels: list[str]) -> int:
    if isinstance(raw, str):
        return labels.index(raw)
    idx = int(raw)
    if not 1 <= idx <= len(labels):
        raise ValueError(f"label index {idx} out of range 1..{len(labels)}")
    return idx - 1


def _mat_inverse(m: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(m)
    a = [row[:] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                fct = a[r][col]
                a[r] = [x - fct * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class LieAlgebra:
    """Validated finite-dimensional Lie algebra with an invariant form.

    ``f[(a, b)]`` is a dict ``c -> f_ab^c``; ``kappa0`` and ``kinv`` are
    dense matrices.
    """

    def __init__(self, labels: list[str], f: dict, kappa0: list[list[Fraction]], validate=True):
        self.labels = list(labels)
        self.dim = len(labels)
        self.f = {k: dict(v) for k, v in f.items() if v}
        self.kappa0 = kappa0
        if validate:
            self._validate()
        inv = _mat_inverse(kappa0)
        if inv is None:
            raise FormDegenerate("invariant form is degenerate")
        self.kinv = inv
        canon = json.dumps(self.to_json(), sort_keys=True)
        self.spec_hash = hashlib.sha256(canon.encode()).hexdigest()[:16]

    # structure
    def bracket(self, a: int, b: int) -> dict[int, Fraction]:
        return self.f.get((a, b), {})

    def bracket_vec(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, fc in self.bracket(a, b).items():
                    add_into(out, c, ca * cb * fc)
        return out

    def form(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
        return sum((ca * cb * self.kappa0[a][b] for a, ca in x.items() for b, cb in y.items()), ZERO)

    def dual_vector(self, a: int) -> dict[int, Fraction]:
        """b^a = sum_b kinv[a][b] b_b, so that kappa0(b^a, b_c) = delta."""
        return {b: self.kinv[a][b] for b in range(self.dim) if self.kinv[a][b]}

    def casimir(self) -> dict[tuple[int, int], Fraction]:
        return {(a, b): self.kinv[a][b] for a in range(self.dim) for b in range(self.dim) if self.kinv[a][b]}

    def _validate(self):
        d = self.dim
        for a in range(d):
            if self.bracket(a, a):
                raise JacobiViolation(f"[{self.labels[a]},{self.labels[a]}] != 0", (a, a))
            for b in range(d):
                fab, fba = self.bracket(a, b), self.bracket(b, a)
                for c in set(fab) | set(fba):
                    if fab.get(c, ZERO) != -fba.get(c, ZERO):
                        raise JacobiViolation(
                            f"antisymmetry fails for ({self.labels[a]},{self.labels[b]},{self.labels[c]})",
                            (a, b, c))
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    x, y, z = {a: ONE}, {b: ONE}, {c: ONE}
                    tot: dict[int, Fraction] = {}
                    for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                        for k, val in self.bracket_vec(u, self.bracket_vec(v, w)).items():
                            add_into(tot, k, val)
                    if tot:
                        raise JacobiViolation(
                            f"Jacobi fails on ({self.labels[a]},{self.labels[b]},{self.labels[c]})", (a, b, c))
        for a in range(d):
            for b in range(d):
                if self.kappa0[a][b] != self.kappa0[b][a]:
                    raise FormNotInvariant(f"form not symmetric at ({self.labels[a]},{self.labels[b]})", (a, b))
        if _mat_inverse(self.kappa0) is None:
            raise FormDegenerate("invariant form is degenerate")
        for a in range(d):
            for b in range(d):
                xy = self.bracket(a, b)
                for c in range(d):
                    lhs = self.form(xy, {c: ONE}) + self.form({b: ONE}, self.bracket(a, c))
                    if lhs:
                        raise FormNotInvariant(
                            f"form not invariant on ({self.labels[a]},{self.labels[b]},{self.labels[c]})",
                            (a, b, c))

    def to_json(self) -> dict:
        f = []
        for (a, b), coeffs in sorted(self.f.items()):
            for c, v in sorted(coeffs.items()):
                f.append([a + 1, b + 1, c + 1, v.numerator, v.denominator])
        k = [[a + 1, b + 1, self.kappa0[a][b].numerator, self.kappa0[a][b].denominator]
             for a in range(self.dim) for b in range(self.dim) if self.kappa0[a][b]]
        return {"dim": self.dim, "labels": self.labels, "f": f, "kappa0": k}

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, labels={self.labels})"


def load_lie_algebra(spec) -> LieAlgebra:
    """Build a validated LieAlgebra from a JSON dict, a path, or a fixture name.

    Structure constants may list only one of (a,b)/(b,a); the missing one is
    filled by antisymmetry.  Listing both inconsistently is an error.
    """
    if isinstance(spec, LieAlgebra):
        return spec
    if isinstance(spec, (str, Path)):
        p = Path(spec)
        if not p.exists():
            p = FIXTURES / f"{spec}.json"
        spec = json.loads(p.read_text())
    labels = [str(x) for x in spec.get("labels") or range(1, spec["dim"] + 1)]
    if len(labels) != spec["dim"]:
        raise ValueError("labels do not match dim")
    given: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a, b, c, num, den in spec["f"]:
        a, b, c = (_parse_label(x, labels) for x in (a, b, c))
        add_into(given.setdefault((a, b), {}), c, Fraction(num, den))
    f: dict[tuple[int, int], dict[int, Fraction]] = {k: dict(v) for k, v in given.items()}
    for (a, b), coeffs in given.items():
        if (b, a) not in given:
            f[(b, a)] = {c: -v for c, v in coeffs.items()}
    d = len(labels)
    kappa = [[ZERO] * d for _ in range(d)]
    seen = set()
    for a, b, num, den in spec["kappa0"]:
        a, b = _parse_label(a, labels), _parse_label(b, labels)
        kappa[a][b] = Fraction(num, den)
        seen.add((a, b))
    for a, b in list(seen):
        if (b, a) not in seen:
            kappa[b][a] = kappa[a][b]
    return LieAlgebra(labels, f, kappa)


def fixture(name: str) -> LieAlgebra:
    return load_lie_algebra(FIXTURES / f"{name}.json")


# --- elements of d((t)) ----------------------------------------------------

Symbol = tuple  # (n, a, sector)


class DElement(dict):
    """Finite linear combination of mode symbols with rational coefficients."""

    @classmethod
    def mode(cls, a: int, n: int, sector: int = G, c=1) -> "DElement":
        return cls({(n, a, sector): Fraction(c)})

    def __add__(self, other):
        out = DElement(self)
        for k, v in other.items():
            add_into(out, k, v)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "DElement":
        c = Fraction(c)
        return DElement({k: v * c for k, v in self.items()} if c else {})

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(n, 2 if s == GSTAR else 0) for (n, _, s) in self}

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1


def bracket_symbols(lie: LieAlgebra, x: Symbol, y: Symbol) -> dict[Symbol, Fraction]:
    """[x, y] in d((t)) for two mode symbols (sectors G / GSTAR only)."""
    n1, a, s1 = x
    n2, b, s2 = y
    if s1 == GSTAR and s2 == GSTAR:
        return {}
    sec = GSTAR if GSTAR in (s1, s2) else G
    return {(n1 + n2, c, sec): v for c, v in lie.bracket(a, b).items()}


def cotangent_bracket(lie: LieAlgebra, x: Mapping, y: Mapping, window: tuple[int, int] | None = None) -> DElement:
    """Bracket of d((t)): [g,g] in g, [g, eps g] in eps g, [eps g, eps g] = 0."""
    out = DElement()
    for sx, cx in x.items():
        for sy, cy in y.items():
            for s, v in bracket_symbols(lie, sx, sy).items():
                if window is not None and not window[0] <= s[0] <= window[1]:
                    raise WindowOverflow(f"loop degree {s[0]} outside window {window}", s)
                add_into(out, s, cx * cy * v)
    return out


def kappa_d(lie: LieAlgebra, x: Mapping, y: Mapping, residue: bool = True) -> Fraction:
    """Invariant form on d((t)): kappa0 pairs g with eps g.

    With ``residue=True`` this is Res_t kappa(x, y) dt, pairing t^n with
    t^{-n-1}; otherwise loop degrees are ignored (evaluation at t = 1).
    """
    tot = ZERO
    for (n1, a, s1), c1 in x.items():
        for (n2, b, s2), c2 in y.items():
            if s1 == s2:
                continue
            if residue and n1 + n2 != -1:
                continue
            tot += c1 * c2 * lie.kappa0[a][b]
    return tot


def casimir_d(lie: LieAlgebra) -> dict[tuple[Symbol, Symbol], Fraction]:
    """C_d = sum kinv^{ab} (b_a (x) eps b_b + eps b_b (x) b_a), constant modes."""
    out: dict = {}
    for (a, b), v in lie.casimir().items():
        add_into(out, ((0, a, G), (0, b, GSTAR)), v)
        add_into(out, ((0, b, GSTAR), (0, a, G)), v)
    return out


def derivation_T(x: Mapping) -> DElement:
    """T(X t^n) = n X t^{n-1} on both sectors."""
    out = DElement()
    for (n, a, s), c in x.items():
        if n:
            add_into(out, (n - 1, a, s), c * n)
    return out


def translate(x: Mapping, power_cap: int | None = None) -> dict[int, DElement]:
    """tau_z = exp(zT) on elements with nonnegative loop degree.

    Returns ``{k: coefficient of z^k}``.
    """
    out: dict[int, DElement] = {}
    for (n, a, s), c in x.items():
        if n < 0:
            raise ValueError("translate needs nonnegative loop degrees")
        for k in range(n + 1):
            if power_cap is not None and k > power_cap:
                break
            add_into(out.setdefault(k, DElement()), (n - k, a, s), c * comb(n, k))
    return {k: v for k, v in out.items() if v}


def symbol_str(lie: LieAlgebra, s: Symbol) -> str:
    n, a, sec = s
    if sec == R:
        return f"r[{lie.labels[a]},{-n - 1}]"
    pre = "eps " if sec == GSTAR else ""
    return f"{pre}{lie.labels[a]}_{n}"


# --- structure suite ---------------------------------------------------------

def _random_homogeneous(lie: LieAlgebra, rng, depth: int) -> DElement:
    n = rng.randint(-depth, depth)
    sec = rng.choice((G, GSTAR))
    out = DElement()
    for a in rng.sample(range(lie.dim), rng.randint(1, lie.dim)):
        c = Fraction(rng.choice((-1, 1)) * rng.randint(1, 5), rng.randint(1, 3))
        out[(n, a, sec)] = c
    return out


def verify_structure(lie: LieAlgebra, samples: int = 10000, seed: int = 0, depth: int = 3) -> dict:
    """Jacobi, invariance of the residue form and bigrading homogeneity on random triples.

    Returns a report dict {identity, window, domain, status, witnesses, checks}.
    """
    import random

    rng = random.Random(seed)
    wit: list = []
    br = lambda u, v: cotangent_bracket(lie, u, v)
    for i in range(samples):
        x, y, z = (_random_homogeneous(lie, rng, depth) for _ in range(3))
        jac = br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y))
        if any(jac.values()):
            wit.append({"sample": i, "check": "jacobi"})
        if kappa_d(lie, br(x, y), z) != kappa_d(lie, x, br(y, z)):
            wit.append({"sample": i, "check": "invariance"})
        b = br(x, y)
        (n1, e1), (n2, e2) = next(iter(x.bidegrees())), next(iter(y.bidegrees()))
        if b and (not b.is_homogeneous() or b.bidegrees() != {(n1 + n2, e1 + e2)}):
            wit.append({"sample": i, "check": "bigrading"})
        if len(wit) >= 20:
            break
    return {"identity": "Jacobi, kappa-invariance, bigrading", "window": {"samples": samples, "depth": depth,
            "seed": seed}, "domain": "formal", "status": "pass" if not wit else "fail", "witnesses": wit}
