"""Cohomology of completely reducible homogeneous bundles on products of Grassmannians.

Conventions. On Gr(k, n) let U be the rank-k tautological subbundle and Q the
rank-(n-k) quotient. An irreducible homogeneous bundle is written as a pair of
weakly decreasing weights (a | b) standing for Sigma^a U^dual (x) Sigma^b Q^dual,
so that O(1) = det U^dual is a = (1,...,1), b = (0,...,0). Borel-Weil-Bott
then reads: add rho = (n, n-1, ..., 1) to the concatenation (a | b); a repeated
entry means all cohomology vanishes, otherwise the number of inversions is the
degree and the sorted weight minus rho gives the GL(n) representation.

The convention is pinned by calibration asserts that run at import time.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from math import prod
from typing import Iterable, Sequence

from .cohvector import CohVector
from .errors import UnsupportedPlethysm

Weight = tuple[int, ...]


@dataclass(frozen=True)
class GrassFactor:
    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n - 1:
            raise ValueError(f"Gr({self.k},{self.n}) needs 1 <= k <= n-1")

    @property
    def dim(self) -> int:
        return self.k * (self.n - self.k)

    def __str__(self):
        if self.k == 1:
            return f"P({self.n - 1})"
        return f"Gr({self.k},{self.n})"


@dataclass(frozen=True, order=True)
class FactorWeight:
    a: Weight
    b: Weight

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        for w in (self.a, self.b):
            if any(w[i] < w[i + 1] for i in range(len(w) - 1)):
                raise ValueError(f"weight {w} is not weakly decreasing")

    @property
    def rank(self) -> int:
        return weyl_dim(self.a, len(self.a)) * weyl_dim(self.b, len(self.b))

    def is_line(self) -> bool:
        return len(set(self.a)) <= 1 and len(set(self.b)) <= 1


IrredSummand = tuple[FactorWeight, ...]


def trivial_weight(factor: GrassFactor) -> FactorWeight:
    return FactorWeight((0,) * factor.k, (0,) * (factor.n - factor.k))


def line_weight(factor: GrassFactor, t: int) -> FactorWeight:
    return FactorWeight((t,) * factor.k, (0,) * (factor.n - factor.k))


class BundleExpr:
    """A formal direct sum of irreducible homogeneous bundles with multiplicities."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[IrredSummand, int]] | Counter = ()):
        c: Counter = Counter()
        items = terms.items() if isinstance(terms, Counter) else terms
        for s, m in items:
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if m:
                c[tuple(s)] += m
        self.terms: tuple[tuple[IrredSummand, int], ...] = tuple(sorted(c.items()))

    @classmethod
    def irreducible(cls, s: IrredSummand, mult: int = 1) -> BundleExpr:
        return cls([(s, mult)])

    @classmethod
    def trivial(cls, factors: Sequence[GrassFactor]) -> BundleExpr:
        return cls.irreducible(tuple(trivial_weight(f) for f in factors))

    @property
    def rank(self) -> int:
        return sum(m * prod(w.rank for w in s) for s, m in self.terms)

    def __add__(self, other: BundleExpr) -> BundleExpr:
        return BundleExpr(list(self.terms) + list(other.terms))

    def scaled(self, k: int) -> BundleExpr:
        return BundleExpr([(s, m * k) for s, m in self.terms])

    def __eq__(self, other):
        return isinstance(other, BundleExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = []
        for s, m in self.terms:
            txt = " # ".join(f"({','.join(map(str, w.a))}|{','.join(map(str, w.b))})" for w in s)
            parts.append(txt + (f"^{m}" if m > 1 else ""))
        return "BundleExpr(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# GL(n) representation theory


def weyl_dim(lam: Sequence[int], n: int) -> int:
    """Dimension of the irreducible GL(n) representation with highest weight lam."""
    lam = list(lam)
    if len(lam) < n:
        if any(x < 0 for x in lam):
            raise ValueError("can only pad nonnegative weights with zeros")
        lam = lam + [0] * (n - len(lam))
    if len(lam) != n:
        raise ValueError(f"weight {tuple(lam)} too long for GL({n})")
    num = den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


def _dot_sort(v: Sequence[int]) -> tuple[int, Weight] | None:
    """Sort v (already shifted by rho) decreasingly; return (inversions, sorted) or None on a repeat."""
    if len(set(v)) != len(v):
        return None
    inv = sum(1 for i in range(len(v)) for j in range(i + 1, len(v)) if v[i] < v[j])
    return inv, tuple(sorted(v, reverse=True))


@lru_cache(maxsize=None)
def gl_weights(lam: Weight) -> tuple[tuple[Weight, int], ...]:
    """Weight multiplicities of the GL(len(lam)) irreducible, by Gelfand-Tsetlin branching."""
    m = len(lam)
    if m == 0:
        return (((), 1),)
    if m == 1:
        return ((lam, 1),)
    total = sum(lam)
    out: Counter = Counter()
    ranges = [range(lam[i + 1], lam[i] + 1) for i in range(m - 1)]
    for mu in iproduct(*ranges):
        last = total - sum(mu)
        for w, c in gl_weights(tuple(mu)):
            out[w + (last,)] += c
    return tuple(sorted(out.items()))


@lru_cache(maxsize=None)
def lr_tensor(x: Weight, y: Weight) -> tuple[tuple[Weight, int], ...]:
    """Decompose V_x (x) V_y for GL(len(x)); weights may be negative.

    Uses the Brauer-Klimyk formula: sum over the weights nu of the smaller
    factor of the dotted-Weyl straightening of x + nu.
    """
    n = len(x)
    if len(y) != n:
        raise ValueError("weights must have the same length")
    if weyl_dim(y, n) > weyl_dim(x, n):
        x, y = y, x
    rho = tuple(range(n, 0, -1))
    out: Counter = Counter()
    for nu, c in gl_weights(y):
        s = _dot_sort(tuple(x[i] + nu[i] + rho[i] for i in range(n)))
        if s is None:
            continue
        inv, v = s
        out[tuple(v[i] - rho[i] for i in range(n))] += -c if inv % 2 else c
    if any(c < 0 for c in out.values()):
        raise AssertionError("negative multiplicity in tensor product decomposition")
    return tuple(sorted((w, c) for w, c in out.items() if c))


def dual_weight(w: Weight) -> Weight:
    return tuple(-x for x in reversed(w))


# ---------------------------------------------------------------------------
# Borel-Weil-Bott


def bott(factor: GrassFactor, w: FactorWeight) -> tuple[int, int] | None:
    """(degree, dimension) of the unique nonzero cohomology of (a | b) on Gr(k, n), or None."""
    return _bott(factor.k, factor.n, w.a, w.b)


@lru_cache(maxsize=None)
def _bott(k: int, n: int, a: Weight, b: Weight) -> tuple[int, int] | None:
    if len(a) != k or len(b) != n - k:
        raise ValueError(f"weight shape does not match Gr({k},{n})")
    rho = tuple(range(n, 0, -1))
    s = _dot_sort(tuple(x + r for x, r in zip(a + b, rho)))
    if s is None:
        return None
    inv, v = s
    return inv, weyl_dim(tuple(x - r for x, r in zip(v, rho)), n)


def cohomology(factors: Sequence[GrassFactor], e: BundleExpr) -> CohVector:
    """Dimensions of H^*(F, e) on F = product of the factors (Kunneth across factors)."""
    dimF = sum(f.dim for f in factors)
    total = [0] * (dimF + 1)
    for s, m in e.terms:
        if len(s) != len(factors):
            raise ValueError("summand does not match the number of factors")
        deg, dim = 0, m
        for f, w in zip(factors, s):
            r = bott(f, w)
            if r is None:
                dim = 0
                break
            deg += r[0]
            dim *= r[1]
        if dim:
            total[deg] += dim
    return CohVector(total)


# ---------------------------------------------------------------------------
# operations on bundle expressions


def _dual_summand(s: IrredSummand) -> IrredSummand:
    return tuple(FactorWeight(dual_weight(w.a), dual_weight(w.b)) for w in s)


def dual(e: BundleExpr) -> BundleExpr:
    return BundleExpr([(_dual_summand(s), m) for s, m in e.terms])


@lru_cache(maxsize=None)
def _tensor_factor(x: FactorWeight, y: FactorWeight) -> tuple[tuple[FactorWeight, int], ...]:
    out = []
    for wa, ca in lr_tensor(x.a, y.a):
        for wb, cb in lr_tensor(x.b, y.b):
            out.append((FactorWeight(wa, wb), ca * cb))
    return tuple(out)


def _tensor_summands(s: IrredSummand, t: IrredSummand) -> list[tuple[IrredSummand, int]]:
    parts = [_tensor_factor(x, y) for x, y in zip(s, t)]
    out = []
    for combo in iproduct(*parts):
        out.append((tuple(w for w, _ in combo), prod(c for _, c in combo)))
    return out


def tensor(e1: BundleExpr, e2: BundleExpr) -> BundleExpr:
    c: Counter = Counter()
    for s, m in e1.terms:
        for t, n in e2.terms:
            for u, k in _tensor_summands(s, t):
                c[u] += m * n * k
    return BundleExpr(c)


def det_line(e: BundleExpr) -> IrredSummand:
    """The determinant line of e, as a rank-one irreducible."""
    if not e.terms:
        raise ValueError("determinant of the zero bundle")
    nf = len(e.terms[0][0])
    degs = [0] * nf
    shape = e.terms[0][0]
    for s, m in e.terms:
        r = prod(w.rank for w in s)
        for i, w in enumerate(s):
            # c1 of Sigma^a U^dual (x) Sigma^b Q^dual in units of c1(O(1)) = c1(U^dual) = -c1(Q^dual)
            ra = weyl_dim(w.a, len(w.a))
            rb = weyl_dim(w.b, len(w.b))
            c1a = sum(w.a) * ra // len(w.a) if w.a else 0
            c1b = sum(w.b) * rb // len(w.b) if w.b else 0
            degs[i] += m * (r // (ra * rb)) * (c1a * rb - c1b * ra)
    return tuple(FactorWeight((d,) * len(w.a), (0,) * len(w.b)) for d, w in zip(degs, shape))


# Schur functors and exterior powers ---------------------------------------


def _partitions(j: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    if max_part is None:
        max_part = j
    if j == 0:
        return [()]
    out = []
    for first in range(min(j, max_part), 0, -1):
        for rest in _partitions(j - first, first):
            out.append((first,) + rest)
    return out


def conjugate(lam: Sequence[int]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0]))


def _fundamental_type(w: Weight) -> tuple[str, int] | None:
    """Classify w as a twisted line ('line', t), standard ('std', t) or dual standard ('dual', t)."""
    if not w:
        return ("line", 0)
    if len(set(w)) == 1:
        return ("line", w[0])
    t = w[-1]
    if w == (t + 1,) + (t,) * (len(w) - 1):
        return ("std", t)
    t = w[0]
    if w == (t,) * (len(w) - 1) + (t - 1,):
        return ("dual", t)
    return None


def _schur_part(w: Weight, lam: tuple[int, ...]) -> Weight | None:
    """Sigma^lam of the GL(len w) irreducible w when w is a twisted line or (dual) standard."""
    r = len(w)
    size = sum(lam)
    kind = _fundamental_type(w)
    if kind is None:
        raise UnsupportedPlethysm(f"Schur functor {lam} of the irreducible with weight {w}")
    tag, t = kind
    if r == 0:
        return () if size == 0 else None
    if tag == "line":
        return (t * size,) * r if len(lam) <= 1 else None
    if len(lam) > r:
        return None
    padded = tuple(lam) + (0,) * (r - len(lam))
    base = padded if tag == "std" else dual_weight(padded)
    return tuple(x + t * size for x in base)


def _components(s: IrredSummand) -> list[tuple[int, str]]:
    """The non-constant weight parts of an irreducible, as (factor index, 'a' or 'b')."""
    out = []
    for i, w in enumerate(s):
        if len(set(w.a)) > 1:
            out.append((i, "a"))
        if len(set(w.b)) > 1:
            out.append((i, "b"))
    return out


def _schur_summand(s: IrredSummand, lam: tuple[int, ...]) -> IrredSummand | None:
    """Sigma^lam of an irreducible with at most one non-constant weight part."""
    comps = _components(s)
    if len(comps) > 1:
        raise UnsupportedPlethysm("Schur functor of a product of two non-line bundles")
    if not comps and len(lam) > 1:
        return None
    size = sum(lam)
    out = []
    for i, w in enumerate(s):
        a = tuple(x * size for x in w.a)
        b = tuple(x * size for x in w.b)
        if (i, "a") in comps:
            a = _schur_part(w.a, lam)
            if a is None:
                return None
        if (i, "b") in comps:
            b = _schur_part(w.b, lam)
            if b is None:
                return None
        out.append(FactorWeight(a, b))
    return tuple(out)


def _wedge_irred(s: IrredSummand, j: int) -> BundleExpr:
    """wedge^j of an irreducible; two non-constant parts are split by the Cauchy identity."""
    if j == 0:
        return BundleExpr.irreducible(tuple(FactorWeight((0,) * len(w.a), (0,) * len(w.b)) for w in s))
    comps = _components(s)
    if len(comps) <= 1:
        r = _schur_summand(s, (1,) * j)
        return BundleExpr([] if r is None else [(r, 1)])
    if len(comps) > 2:
        raise UnsupportedPlethysm("exterior power of a product of three non-line bundles")
    i2, part = comps[1]
    first, second = [], []
    for i, w in enumerate(s):
        za, zb = (0,) * len(w.a), (0,) * len(w.b)
        if i != i2:
            first.append(w)
            second.append(FactorWeight(za, zb))
        elif part == "a":
            first.append(FactorWeight(za, w.b))
            second.append(FactorWeight(w.a, zb))
        else:
            first.append(FactorWeight(w.a, zb))
            second.append(FactorWeight(za, w.b))
    c: Counter = Counter()
    for lam in _partitions(j):
        x = _schur_summand(tuple(first), lam)
        y = _schur_summand(tuple(second), conjugate(lam))
        if x is None or y is None:
            continue
        for u, k in _tensor_summands(x, y):
            c[u] += k
    return BundleExpr(c)


def exterior_power(e: BundleExpr, j: int) -> BundleExpr:
    """The j-th exterior power, expanded multinomially over the summands."""
    if j < 0:
        raise ValueError("negative exterior power")
    if not e.terms:
        if j:
            return BundleExpr()
        raise ValueError("exterior power of the zero bundle needs the factor list")
    copies: list[IrredSummand] = []
    for s, m in e.terms:
        copies.extend([s] * m)
    ranks = [prod(w.rank for w in s) for s in copies]
    if j > sum(ranks):
        return BundleExpr()
    cache: dict[tuple[int, int], BundleExpr] = {}

    def wedge(i: int, k: int) -> BundleExpr:
        key = (i, k)
        if key not in cache:
            cache[key] = _wedge_irred(copies[i], k)
        return cache[key]

    # dynamic programming over the summands: level[k] = wedge^k of the first i copies
    unit = BundleExpr.irreducible(
        tuple(FactorWeight((0,) * len(w.a), (0,) * len(w.b)) for w in copies[0])
    )
    level: dict[int, BundleExpr] = {0: unit}
    for i, r in enumerate(ranks):
        nxt: dict[int, BundleExpr] = {}
        for k, acc in level.items():
            for t in range(0, min(r, j - k) + 1):
                term = tensor(acc, wedge(i, t))
                nxt[k + t] = nxt[k + t] + term if k + t in nxt else term
        level = nxt
    return level.get(j, BundleExpr())


def cotangent(factor: GrassFactor) -> FactorWeight:
    """Omega^1 of Gr(k, n) is U (x) Q^dual."""
    k, n = factor.k, factor.n
    return FactorWeight((0,) * (k - 1) + (-1,), (1,) + (0,) * (n - k - 1))


def ambient_cotangent(factors: Sequence[GrassFactor]) -> BundleExpr:
    terms = []
    for i, f in enumerate(factors):
        s = tuple(cotangent(g) if j == i else trivial_weight(g) for j, g in enumerate(factors))
        terms.append((s, 1))
    return BundleExpr(terms)


def canonical_line(factors: Sequence[GrassFactor]) -> IrredSummand:
    return tuple(line_weight(f, -f.n) for f in factors)


def line(factors: Sequence[GrassFactor], degrees: Sequence[int]) -> BundleExpr:
    if len(degrees) != len(factors):
        raise ValueError("one degree per factor expected")
    return BundleExpr.irreducible(tuple(line_weight(f, t) for f, t in zip(factors, degrees)))


# ---------------------------------------------------------------------------
# text grammar

_FACTOR_RE = re.compile(r"\s*(?:Gr\(\s*(\d+)\s*,\s*(\d+)\s*\)|P\(\s*(\d+)\s*\)|P\^?(\d+))\s*")


def parse_factors(text: str) -> list[GrassFactor]:
    """Parse ``Gr(2,4)xP(3)`` style products; ``P(n)`` means Gr(1, n+1)."""
    parts = re.split(r"\s*(?:×|\bx\b|(?<=\))x|\*)\s*", text.strip())
    out = []
    for p in parts:
        m = _FACTOR_RE.fullmatch(p)
        if not m:
            raise ValueError(f"cannot parse ambient factor {p!r}")
        if m.group(1):
            out.append(GrassFactor(int(m.group(1)), int(m.group(2))))
        else:
            n = int(m.group(3) or m.group(4))
            out.append(GrassFactor(1, n + 1))
    return out


def format_factors(factors: Sequence[GrassFactor]) -> str:
    return "x".join(str(f) for f in factors)


class GrammarError(ValueError):
    def __init__(self, pos: int, reason: str):
        super().__init__(f"position {pos}: {reason}")
        self.pos = pos
        self.reason = reason


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>-?\d+)|(?P<name>wedge2Udual|Udual|Qdual|cotangent|tangent|U|Q|O)|(?P<op>[()+*#^,]))"
)


def _normalise(text: str) -> str:
    for src, dst in (("^∨", "dual"), ("∨", "dual"), ("⊕", "+"), ("⊗", "*"), ("⊠", "#"), ("⋀²", "wedge2"), ("Λ²", "wedge2")):
        text = text.replace(src, dst)
    return text


class _Parser:
    def __init__(self, text: str, factors: Sequence[GrassFactor]):
        self.text = _normalise(text)
        self.factors = list(factors)
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(self.text):
            if self.text[pos:].strip() == "":
                break
            m = _TOKEN_RE.match(self.text, pos)
            if not m or m.end() == pos:
                raise GrammarError(pos, f"unexpected character {self.text[pos]!r}")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise GrammarError(tok[2], f"expected {value!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self) -> BundleExpr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise GrammarError(tok[2], f"unexpected {tok[1]!r}")
        return e

    def expr(self) -> BundleExpr:
        e = self.term()
        while self.peek()[1] == "+":
            self.take()
            e = e + self.term()
        return e

    def term(self) -> BundleExpr:
        e = self.product()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or int(tok[1]) < 1:
                raise GrammarError(tok[2], "multiplicity must be a positive integer")
            e = e.scaled(int(tok[1]))
        return e

    def product(self) -> BundleExpr:
        e = self.boxed()
        while self.peek()[1] == "*":
            self.take()
            e = tensor(e, self.boxed())
        return e

    def boxed(self) -> BundleExpr:
        start = self.peek()[2]
        slots = [self.slot_atom()]
        while self.peek()[1] == "#":
            self.take()
            slots.append(self.slot_atom())
        if len(slots) == 1:
            item = slots[0]
            if isinstance(item, BundleExpr):
                return item
            if len(self.factors) == 1:
                return self._place([item])
            name, t = item
            if name in ("cotangent", "tangent") and t == 0:
                e = ambient_cotangent(self.factors)
                return dual(e) if name == "tangent" else e
            if name == "line" and t == 0:
                return BundleExpr.trivial(self.factors)
            raise GrammarError(start, "factor-local bundle needs box-product slots on a product ambient")
        if len(slots) != len(self.factors):
            raise GrammarError(start, f"box product has {len(slots)} slots for {len(self.factors)} factors")
        return self._place(slots)

    def _place(self, slots) -> BundleExpr:
        per_factor = []
        for f, item in zip(self.factors, slots):
            if isinstance(item, BundleExpr):
                raise GrammarError(0, "parenthesised expressions cannot be used as box-product slots")
            per_factor.append(self._local(f, item))
        out = BundleExpr.irreducible(tuple(trivial_weight(f) for f in self.factors))
        for i, local in enumerate(per_factor):
            lifted = BundleExpr(
                [
                    (tuple(w if j == i else trivial_weight(g) for j, g in enumerate(self.factors)), m)
                    for w, m in local
                ]
            )
            out = tensor(out, lifted)
        return out

    @staticmethod
    def _local(f: GrassFactor, item) -> list[tuple[FactorWeight, int]]:
        name, twist = item
        k, r = f.k, f.n - f.k
        z_a, z_b = (0,) * k, (0,) * r
        if name == "line":
            base = FactorWeight(z_a, z_b)
        elif name == "Udual":
            base = FactorWeight((1,) + (0,) * (k - 1), z_b)
        elif name == "U":
            base = FactorWeight((0,) * (k - 1) + (-1,), z_b)
        elif name == "Qdual":
            base = FactorWeight(z_a, (1,) + (0,) * (r - 1))
        elif name == "Q":
            base = FactorWeight(z_a, (0,) * (r - 1) + (-1,))
        elif name == "wedge2Udual":
            if k < 2:
                raise ValueError("wedge2Udual needs k >= 2")
            base = FactorWeight((1, 1) + (0,) * (k - 2), z_b)
        elif name == "cotangent":
            base = cotangent(f)
        elif name == "tangent":
            c = cotangent(f)
            base = FactorWeight(dual_weight(c.a), dual_weight(c.b))
        else:
            raise ValueError(name)
        return [(FactorWeight(tuple(x + twist for x in base.a), base.b), 1)]

    def slot_atom(self):
        kind, val, pos = self.peek()
        if val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if kind != "name":
            raise GrammarError(pos, f"expected a bundle token, found {val or 'end of input'!r}")
        self.take()
        twists: list[int] = []
        if self.peek()[1] == "(":
            save = self.i
            self.take()
            nums = []
            while True:
                tok = self.take()
                if tok[0] != "num":
                    if val == "O":
                        raise GrammarError(tok[2], "O(...) expects integers")
                    self.i = save
                    nums = None
                    break
                nums.append(int(tok[1]))
                if self.peek()[1] == ",":
                    self.take()
                    continue
                self.take(")")
                break
            if nums is not None:
                twists = nums
        name = "line" if val == "O" else val
        if len(twists) > 1:
            if name != "line":
                raise GrammarError(pos, "multi-degree twists are only allowed on O(...)")
            if len(twists) != len(self.factors):
                raise GrammarError(pos, f"O(...) has {len(twists)} degrees for {len(self.factors)} factors")
            return line(self.factors, twists)
        return (name, twists[0] if twists else 0)


def parse_bundle(text: str, factors: Sequence[GrassFactor]) -> BundleExpr:
    """Parse a bundle expression such as ``Udual#O(1) + O(1,1) + O(1,0)``.

    Tokens: U, Udual, Q, Qdual, wedge2Udual, O, cotangent, tangent; an
    optional twist ``(t)`` after a factor-local token; ``O(t1,...,tf)`` for a
    line on the whole product; ``#`` (or the box-product sign) separates the
    per-factor slots; ``*`` is the tensor product, ``+`` the direct sum and
    ``^m`` a multiplicity.
    """
    return _Parser(text, factors).parse()


# ---------------------------------------------------------------------------
# calibration


def _calibrate() -> None:
    g25, g24 = GrassFactor(2, 5), GrassFactor(2, 4)
    assert bott(g25, line_weight(g25, 1)) == (0, 10), "H^0(Gr(2,5), O(1)) must be 10"
    assert bott(g24, cotangent(g24)) == (1, 1), "Omega^1 of Gr(2,4) must have h^1 = 1 only"
    t = cotangent(g24)
    assert bott(g24, FactorWeight(dual_weight(t.a), dual_weight(t.b))) == (0, 15), "H^0(T Gr(2,4)) must be 15"


_calibrate()
