"""Dimension chasing through long exact sequences.

A ``ChaseProblem`` collects nonnegative integer unknowns, linear equalities
between them and exact sequences of finite-dimensional vector spaces. An exact
sequence 0 -> V_0 -> ... -> V_m -> 0 is encoded with rank variables
r_0, ..., r_{m-1} >= 0 and the equalities dim V_i = r_{i-1} + r_i.

``solve`` returns the exact projection of the integer feasible region on each
unknown: bounds propagation runs to a fixpoint, then every lower and upper
bound is certified by a branch-and-propagate feasibility search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .cohvector import CohVector, Unknown, make_entry
from .errors import Infeasible, UnknownEntries

Term = Union[int, str, Unknown, "LinExpr"]


@dataclass(frozen=True)
class LinExpr:
    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @classmethod
    def of(cls, t: Mapping[str, int] | None = None, const: int = 0) -> LinExpr:
        items = tuple(sorted((k, v) for k, v in (t or {}).items() if v))
        return cls(items, const)

    def __add__(self, other: LinExpr) -> LinExpr:
        d = dict(self.coeffs)
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return LinExpr.of(d, self.const + other.const)

    def scaled(self, k: int) -> LinExpr:
        return LinExpr.of({v: c * k for v, c in self.coeffs}, self.const * k)


@dataclass
class Solution:
    bounds: dict[str, tuple[int, int | None]]

    def entry(self, t: Term):
        lo, hi = self.expr_bounds(t)
        return make_entry(lo, hi)

    def expr_bounds(self, t: Term) -> tuple[int, int | None]:
        if isinstance(t, int):
            return t, t
        if isinstance(t, str):
            return self.bounds[t]
        if isinstance(t, LinExpr):
            lo, hi = t.const, t.const
            for v, c in t.coeffs:
                vlo, vhi = self.bounds[v]
                if c > 0:
                    lo += c * vlo
                    hi = None if hi is None or vhi is None else hi + c * vhi
                else:
                    lo = None if lo is None or vhi is None else lo + c * vhi
                    hi = None if hi is None else hi + c * vlo
            # interval arithmetic on a sum of variables is only a relaxation
            return max(lo or 0, 0), hi
        raise TypeError(f"cannot evaluate {t!r}")

    def value(self, name: str) -> int:
        lo, hi = self.bounds[name]
        if lo != hi:
            raise UnknownEntries(f"{name} lies in [{lo},{hi}]")
        return lo

    def vector(self, terms: Sequence[Term]) -> CohVector:
        return CohVector([self.entry(t) for t in terms])

    def determined(self, name: str) -> bool:
        lo, hi = self.bounds[name]
        return lo == hi


class ChaseProblem:
    def __init__(self):
        self.lo: dict[str, int] = {}
        self.hi: dict[str, int | None] = {}
        self.eqs: list[tuple[dict[str, int], int]] = []
        self.trace: list[str] = []
        self._count = 0

    # -- registration -------------------------------------------------------

    def var(self, name: str | None = None, lo: int = 0, hi: int | None = None) -> str:
        if name is None or name in self.lo:
            self._count += 1
            base = name or "v"
            name = f"{base}#{self._count}"
        self.lo[name] = lo
        self.hi[name] = hi
        return name

    def _expr(self, t: Term) -> tuple[dict[str, int], int]:
        if isinstance(t, bool):
            raise TypeError("boolean is not a dimension")
        if isinstance(t, int):
            return {}, t
        if isinstance(t, str):
            if t not in self.lo:
                raise KeyError(f"unregistered variable {t!r}")
            return {t: 1}, 0
        if isinstance(t, Unknown):
            if t.var and t.var in self.lo:
                return {t.var: 1}, 0
            return {self.var(t.var or "u", t.lo, t.hi): 1}, 0
        if isinstance(t, LinExpr):
            return dict(t.coeffs), t.const
        raise TypeError(f"unsupported term {t!r}")

    def add_linear(self, coeffs: Mapping[Term, int] | dict, rhs: int) -> None:
        """Register sum coeffs[t] * t == rhs."""
        total: dict[str, int] = {}
        const = 0
        for t, c in coeffs.items():
            d, k = self._expr(t)
            for v, x in d.items():
                total[v] = total.get(v, 0) + c * x
            const += c * k
        total = {v: c for v, c in total.items() if c}
        self.eqs.append((total, rhs - const))

    def add_equal(self, t: Term, value: Term) -> None:
        a, ka = self._expr(t)
        b, kb = self._expr(value)
        total = dict(a)
        for v, c in b.items():
            total[v] = total.get(v, 0) - c
        self.eqs.append(({v: c for v, c in total.items() if c}, kb - ka))

    def add_exact(self, terms: Sequence[Term], label: str = "") -> list[str]:
        """0 -> terms[0] -> ... -> terms[-1] -> 0 is exact. Returns the rank variables."""
        ranks = [self.var(f"rank{label}") for _ in range(len(terms) - 1)]
        for i, t in enumerate(terms):
            d, k = self._expr(t)
            eq = dict(d)
            if i > 0:
                eq[ranks[i - 1]] = eq.get(ranks[i - 1], 0) - 1
            if i < len(ranks):
                eq[ranks[i]] = eq.get(ranks[i], 0) - 1
            self.eqs.append(({v: c for v, c in eq.items() if c}, -k))
        if label:
            self.trace.append(f"exact sequence {label} with {len(terms)} terms")
        return ranks

    def add_ses(self, a: Sequence[Term], b: Sequence[Term], c: Sequence[Term], label: str = "") -> None:
        """Long exact cohomology sequence of 0 -> A -> B -> C -> 0."""
        n = max(len(a), len(b), len(c))
        pad = lambda v: list(v) + [0] * (n - len(v))  # noqa: E731
        a, b, c = pad(a), pad(b), pad(c)
        seq: list[Term] = []
        for i in range(n):
            seq += [a[i], b[i], c[i]]
        self.add_exact(seq, label)

    # -- solving ------------------------------------------------------------

    def _cap(self) -> int:
        return 4 * (1 + sum(abs(r) for _, r in self.eqs)) + 64

    def _propagate(self, lo: dict, hi: dict) -> bool:
        """Tighten bounds in place; False on contradiction."""
        for _ in range(10000):
            changed = False
            for coeffs, rhs in self.eqs:
                if not coeffs:
                    if rhs != 0:
                        return False
                    continue
                # min and max of sum c*x
                for v, c in coeffs.items():
                    rest_min, rest_max = 0, 0
                    inf_min = inf_max = False
                    for w, d in coeffs.items():
                        if w == v:
                            continue
                        if d > 0:
                            rest_min += d * lo[w]
                            if hi[w] is None:
                                inf_max = True
                            else:
                                rest_max += d * hi[w]
                        else:
                            rest_max += d * lo[w]
                            if hi[w] is None:
                                inf_min = True
                            else:
                                rest_min += d * hi[w]
                    # c*v = rhs - rest  ->  c*v in [rhs - rest_max, rhs - rest_min]
                    lo_cv = None if inf_max else rhs - rest_max
                    hi_cv = None if inf_min else rhs - rest_min
                    if c > 0:
                        new_lo = None if lo_cv is None else -((-lo_cv) // c)
                        new_hi = None if hi_cv is None else hi_cv // c
                    else:
                        new_lo = None if hi_cv is None else -((hi_cv) // (-c))
                        new_hi = None if lo_cv is None else (-lo_cv) // (-c)
                    if new_lo is not None and new_lo > lo[v]:
                        lo[v] = new_lo
                        changed = True
                    if new_hi is not None and (hi[v] is None or new_hi < hi[v]):
                        hi[v] = new_hi
                        changed = True
                    if hi[v] is not None and lo[v] > hi[v]:
                        return False
            if not changed:
                return True
        return True

    def _feasible(self, lo: dict, hi: dict, cap: int, depth: int = 0) -> bool:
        lo, hi = dict(lo), dict(hi)
        if not self._propagate(lo, hi):
            return False
        free = [v for v in lo if hi[v] is None or hi[v] > lo[v]]
        if not free:
            return all(sum(c * lo[v] for v, c in co.items()) == r for co, r in self.eqs)
        if depth > 400:
            raise RuntimeError("chase search too deep")
        v = min(free, key=lambda x: (min(hi[x] if hi[x] is not None else cap, cap) - lo[x], x))
        top = hi[v] if hi[v] is not None else max(cap, lo[v])
        if top < lo[v]:
            return False
        mid = (lo[v] + top) // 2
        left_hi = dict(hi)
        left_hi[v] = mid
        if self._feasible(lo, left_hi, cap, depth + 1):
            return True
        right_lo = dict(lo)
        right_lo[v] = mid + 1
        right_hi = dict(hi)
        if hi[v] is None:
            right_hi[v] = top
        return self._feasible(right_lo, right_hi, cap, depth + 1)

    def solve(self, targets: Sequence[str] | None = None) -> Solution:
        """Tight bounds for ``targets`` (default: every variable).

        Variables outside ``targets`` keep their propagated bounds, which are
        valid but possibly loose.
        """
        lo, hi = dict(self.lo), dict(self.hi)
        if not self._propagate(lo, hi):
            raise Infeasible("bounds propagation found a contradiction", self.trace)
        cap = self._cap() + max([h for h in hi.values() if h is not None] + [0])
        search_hi = {v: (h if h is not None else cap) for v, h in hi.items()}
        if not self._feasible(lo, search_hi, cap):
            raise Infeasible("no nonnegative integer point satisfies the constraints", self.trace)
        bounds: dict[str, tuple[int, int | None]] = {v: (lo[v], hi[v]) for v in lo}
        wanted = set(lo) if targets is None else set(targets)
        for v in lo:
            if v not in wanted:
                continue
            if hi[v] is not None and lo[v] == hi[v]:
                bounds[v] = (lo[v], hi[v])
                continue
            # smallest feasible value
            a, b = lo[v], search_hi[v]
            trial = dict(search_hi)
            trial[v] = a
            if self._feasible(lo, trial, cap):
                b = a
            while a < b:
                mid = (a + b) // 2
                trial = dict(search_hi)
                trial[v] = mid
                if self._feasible(lo, trial, cap):
                    b = mid
                else:
                    a = mid + 1
            vmin = a
            # largest feasible value, or None when it reaches the search cap
            a, b = vmin, search_hi[v]
            trial = dict(lo)
            trial[v] = b
            if self._feasible(trial, search_hi, cap):
                a = b
            while a < b:
                mid = (a + b + 1) // 2
                trial = dict(lo)
                trial[v] = mid
                if self._feasible(trial, search_hi, cap):
                    a = mid
                else:
                    b = mid - 1
            vmax: int | None = a
            if hi[v] is None and a >= cap:
                vmax = None
            bounds[v] = (vmin, vmax)
        return Solution(bounds)


# ---------------------------------------------------------------------------
# Koszul restriction and conormal assembly


def register_koszul(prob: ChaseProblem, ambient: Sequence[CohVector], dim_x: int, label: str = "") -> list[str]:
    """Register the Koszul resolution of G|_X and return variables for H^*(X, G|_X).

    ``ambient[j]`` is H^*(F, wedge^j E^dual (x) G); X has dimension ``dim_x``.
    """
    r = len(ambient) - 1
    if r < 0:
        raise ValueError("need at least the j = 0 term")
    n = max(len(v) for v in ambient)
    vecs = [list(v.padded(n).entries) for v in ambient]
    target = [prob.var(f"h{i}({label}|X)") for i in range(n)]
    for i in range(dim_x + 1, n):
        prob.add_equal(target[i], 0)
    if r == 0:
        for i in range(n):
            prob.add_equal(target[i], vecs[0][i])
        return target[: dim_x + 1]
    # Z_1 = image(K_1 -> K_0), ..., Z_r = K_r
    prev: list[Term] = list(target)
    for j in range(1, r + 1):
        if j == r:
            z: list[Term] = vecs[r]
        else:
            z = [prob.var(f"h{i}(Z{j},{label})") for i in range(n)]
        prob.add_ses(z, vecs[j - 1], prev, label=f"koszul {label} step {j}")
        prev = z
    return target[: dim_x + 1]


def koszul_restrict(ambient: Sequence[CohVector], dim_x: int | None = None, pins: Mapping | None = None) -> CohVector:
    """Cohomology of G|_X from H^*(F, wedge^j E^dual (x) G), j = 0..codim."""
    n = max(len(v) for v in ambient)
    if dim_x is None:
        dim_x = n - 1 - (len(ambient) - 1)
    prob = ChaseProblem()
    target = register_koszul(prob, ambient, dim_x)
    _apply_pins(prob, target, pins or {})
    return prob.solve(target).vector(target)


def _apply_pins(prob: ChaseProblem, target: Sequence[Term], pins: Mapping) -> None:
    if pins.get("chi") is not None:
        prob.add_linear({t: (-1) ** i for i, t in enumerate(target)}, pins["chi"])
    for deg in pins.get("vanishing", ()):
        prob.add_equal(target[deg], 0)


def register_conormal(prob: ChaseProblem, first: Sequence[Term], second: Sequence[Term], chi: int | None) -> list[str]:
    """0 -> first -> second -> wedge^2 T_X -> 0 on a 3-fold, with h^3 = 0 and the chi pin."""
    result = [prob.var(f"h{i}(wedge2T)") for i in range(4)]
    prob.add_ses(list(first)[:4], list(second)[:4], result, label="conormal")
    prob.add_equal(result[3], 0)
    if chi is not None:
        prob.add_linear({result[0]: 1, result[1]: -1, result[2]: 1, result[3]: -1}, chi)
    return result


def conormal_assemble(first: CohVector, second: CohVector, pins: Mapping | None = None) -> CohVector:
    pins = pins or {}
    prob = ChaseProblem()
    result = register_conormal(prob, list(first.padded(4)), list(second.padded(4)), pins.get("chi"))
    out = prob.solve(result).vector(result)
    if out.is_known and pins.get("chi") is not None:
        assert out.chi() == pins["chi"]
    return out


def kunneth(x: CohVector, y: CohVector) -> CohVector:
    a, b = x.values(), y.values()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return CohVector(out)


def sum_terms(vectors: Sequence[Sequence[Term]]) -> list[Term]:
    """Degree-wise sum of several term vectors as linear expressions."""
    n = max(len(v) for v in vectors)
    out: list[Term] = []
    for i in range(n):
        acc = LinExpr()
        for v in vectors:
            if i >= len(v):
                continue
            t = v[i]
            if isinstance(t, int):
                acc = acc + LinExpr((), t)
            elif isinstance(t, str):
                acc = acc + LinExpr(((t, 1),), 0)
            elif isinstance(t, LinExpr):
                acc = acc + t
            else:
                raise TypeError(f"cannot sum {t!r}")
        out.append(acc.const if not acc.coeffs else acc)
    return out
