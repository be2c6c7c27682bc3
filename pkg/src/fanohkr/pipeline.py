"""Per-family orchestration: pick a model, run an engine, assemble the parallelogram.

Every engine reduces to the same picture. X is cut out of a key variety F by
a section of E, and since X is a 3-fold, wedge^2 T_X = Omega^1_X (x) omega_X^dual.
The conormal sequence twisted by omega_X^dual reads

    0 -> E^dual (x) w|_X -> Omega^1_F (x) w|_X -> wedge^2 T_X -> 0,
    w = omega_F^dual (x) det E^dual,

and both restricted terms are resolved by Koszul complexes whose terms live
on F. The dimension chase through these sequences runs in the exactseq solver,
pinned by h^3(wedge^2 T_X) = 0 and the closed-form Euler characteristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

from . import bwb, toric
from .cohvector import CohVector, Unknown
from .errors import AnchorMismatch, ConsistencyError, Infeasible, NoModel
from .exactseq import ChaseProblem, LinExpr, Term, kunneth, register_koszul, sum_terms
from .invariants import (
    ClassificationRecord,
    FamilyId,
    Parallelogram,
    assemble_parallelogram,
    chi_anticanonical,
    chi_checks,
    chi_wedge2_tangent,
    h_tangent,
)

SPECIAL_TAGS = ("M1-1", "M2-1", "M2-3", "M4-13", "M10-1")
ENGINES = ("toric", "homogeneous", "special")


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class ToricModel:
    fan: toric.Fan
    lattice: toric.DivisorClassLattice
    sections: tuple[tuple[int, ...], ...]
    note: str = ""

    def validate(self) -> None:
        self.fan.check_complete()
        for c in self.sections:
            if len(c) != self.lattice.class_rank:
                raise ValueError(f"section class {c} has the wrong length")
            toric.require_cartier(self.fan, self.lattice.representative_of(c))
        if self.fan.dim - len(self.sections) != 3:
            raise ValueError(f"dim F - codim = {self.fan.dim - len(self.sections)}, expected 3")


@dataclass(frozen=True)
class HomogeneousModel:
    factors: tuple[bwb.GrassFactor, ...]
    bundle: str
    printed_codim: int | None = None

    @property
    def expr(self) -> bwb.BundleExpr:
        if not self.bundle.strip():
            return bwb.BundleExpr()
        return bwb.parse_bundle(self.bundle, self.factors)

    @property
    def codim(self) -> int:
        return self.expr.rank

    def validate(self) -> None:
        dim_f = sum(f.dim for f in self.factors)
        if dim_f - self.codim != 3:
            raise ValueError(f"dim F = {dim_f} and rank E = {self.codim} do not cut out a 3-fold")


@dataclass(frozen=True)
class SpecialModel:
    tag: str

    def validate(self) -> None:
        if self.tag not in SPECIAL_TAGS:
            raise ValueError(f"unknown special recipe {self.tag!r}")


ModelData = Union[ToricModel, HomogeneousModel, SpecialModel]


@dataclass(frozen=True)
class FamilyModel:
    id: FamilyId
    data: ModelData

    @property
    def kind(self) -> str:
        if isinstance(self.data, ToricModel):
            return "toric"
        if isinstance(self.data, HomogeneousModel):
            return "homogeneous"
        return "special"

    def validate(self) -> None:
        self.data.validate()


@dataclass
class ComputationReport:
    family: FamilyId
    engine: str
    wedge2: CohVector
    entries: tuple
    determined: bool
    trace: list[tuple[str, CohVector]] = field(default_factory=list)
    checks: tuple[bool, bool, bool] | None = None

    @property
    def parallelogram(self) -> Parallelogram:
        if not self.determined:
            raise ValueError(f"{self.family} is underdetermined")
        return Parallelogram(*self.entries)

    @property
    def underdetermined(self) -> list[tuple[str, int, int | None]]:
        names = ("pv01", "pv11", "pv02", "pv12", "pv22", "pv03")
        return [(n, e.lo, e.hi) for n, e in zip(names, self.entries) if isinstance(e, Unknown)]


# ---------------------------------------------------------------------------
# shared chase helper


class _Chase:
    """One ChaseProblem shared by all Koszul chases of a computation.

    Each chase is first solved on its own; fully determined results enter the
    shared problem as constants and only undetermined chases contribute
    their constraints, which keeps the final search small.
    """

    def __init__(self, trace: list | None):
        self.prob = ChaseProblem()
        self.trace = trace

    def log(self, label: str, vec: CohVector) -> None:
        if self.trace is not None:
            self.trace.append((label, vec))

    def restrict(self, ambient: Sequence[CohVector], dim_x: int, label: str) -> list[Term]:
        for j, v in enumerate(ambient):
            self.log(f"{label}: ambient wedge^{j}", v)
        alone = ChaseProblem()
        target = register_koszul(alone, ambient, dim_x, label)
        vec = alone.solve(target).vector(target)
        self.log(f"{label}: restricted", vec)
        if vec.is_known:
            return list(vec.values())
        return register_koszul(self.prob, ambient, dim_x, label)

    def conormal(self, first: Sequence[Term], second: Sequence[Term], chi: int | None, label: str = "wedge2T") -> list[str]:
        n = 4
        result = [self.prob.var(f"h{i}({label})") for i in range(n)]
        pad = lambda v: list(v)[:n] + [0] * (n - len(v))  # noqa: E731
        self.prob.add_ses(pad(first), pad(second), result, label=label)
        self.prob.add_equal(result[3], 0)
        if chi is not None:
            self.prob.add_linear({result[0]: 1, result[1]: -1, result[2]: 1, result[3]: -1}, chi)
        return result

    def solve(self, result: Sequence[str]) -> CohVector:
        vec = self.prob.solve(result).vector(result)
        self.log("wedge^2 T_X", vec)
        return vec


def _scaled(terms: Sequence[Term], m: int) -> list[Term]:
    if m == 1:
        return list(terms)
    out: list[Term] = []
    for t in terms:
        if isinstance(t, int):
            out.append(t * m)
        elif isinstance(t, str):
            out.append(LinExpr(((t, m),), 0))
        else:
            out.append(t.scaled(m))
    return out


# ---------------------------------------------------------------------------
# toric engine


class _ToricCache:
    def __init__(self, fan: toric.Fan, lattice: toric.DivisorClassLattice):
        self.fan = fan
        self.lattice = lattice
        self._line: dict = {}
        self._cot: dict = {}

    def line(self, cls: Sequence[int]) -> CohVector:
        key = tuple(cls)
        if key not in self._line:
            self._line[key] = toric.line_bundle_cohomology(self.fan, self.lattice.representative_of(key))
        return self._line[key]

    def cot(self, cls: Sequence[int]) -> CohVector:
        key = tuple(cls)
        if key not in self._cot:
            self._cot[key] = toric.cotangent_twist_cohomology(self.fan, self.lattice.representative_of(key))
        return self._cot[key]


def _sub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def _toric_conormal_terms(
    chase: _Chase, cache: _ToricCache, classes: Sequence[Sequence[int]], twist: Sequence[int], label: str = ""
) -> tuple[list[Term], list[Term]]:
    """Restricted cohomology terms of E^dual(twist)|_X and Omega^1_F(twist)|_X."""
    fan = cache.fan
    r = len(classes)
    dim_x = fan.dim - r
    zero = CohVector.zero(fan.dim + 1)
    sums = []
    for j in range(r + 1):
        sums.append([tuple(map(sum, zip(*[classes[i] for i in S]))) if S else (0,) * len(twist)
                     for S in itertools.combinations(range(r), j)])
    first_parts = []
    for i, c in enumerate(classes):
        base = _sub(twist, c)
        amb = []
        for j in range(r + 1):
            v = zero
            for cS in sums[j]:
                v = v + cache.line(_sub(base, cS))
            amb.append(v)
        first_parts.append(chase.restrict(amb, dim_x, f"{label}O({','.join(map(str, base))})|X"))
    first = sum_terms(first_parts) if first_parts else [0] * (dim_x + 1)
    amb = []
    for j in range(r + 1):
        v = zero
        for cS in sums[j]:
            v = v + cache.cot(_sub(twist, cS))
        amb.append(v)
    second = chase.restrict(amb, dim_x, f"{label}Omega1({','.join(map(str, twist))})|X")
    return first, second


def toric_ci(
    fan: toric.Fan,
    lattice: toric.DivisorClassLattice,
    classes: Sequence[Sequence[int]],
    rec: ClassificationRecord | None = None,
    trace: list | None = None,
    pins: bool = True,
) -> CohVector:
    """H^*(X, wedge^2 T_X) for X a complete intersection of the given classes in a toric F."""
    for c in classes:
        toric.require_cartier(fan, lattice.representative_of(c))
    if fan.dim - len(classes) != 3:
        raise ValueError("the toric engine expects a 3-fold")
    anti = lattice.class_of(toric.anticanonical(fan))
    w = anti
    for c in classes:
        w = _sub(w, c)
    chase = _Chase(trace)
    cache = _ToricCache(fan, lattice)
    first, second = _toric_conormal_terms(chase, cache, classes, w)
    chi = chi_wedge2_tangent(rec) if (pins and rec is not None) else None
    if pins:
        result = chase.conormal(first, second, chi)
    else:
        result = [chase.prob.var(f"h{i}(wedge2T)") for i in range(4)]
        chase.prob.add_ses(list(first), list(second), result, label="conormal")
    return chase.solve(result)


# ---------------------------------------------------------------------------
# homogeneous engine


def omega_x_dual(factors: Sequence[bwb.GrassFactor], e: bwb.BundleExpr) -> bwb.BundleExpr:
    """omega_X^dual = omega_F^dual (x) det E^dual as a line on F."""
    if not e.terms:
        return bwb.line(factors, [f.n for f in factors])
    det = bwb.det_line(e)
    degs = [f.n - w.a[0] for f, w in zip(factors, det)]
    return bwb.line(factors, degs)


def homogeneous_ci(
    factors: Sequence[bwb.GrassFactor],
    e: bwb.BundleExpr,
    rec: ClassificationRecord | None = None,
    trace: list | None = None,
) -> CohVector:
    """H^*(X, wedge^2 T_X) for X the zero locus of a section of e on a product of Grassmannians."""
    factors = list(factors)
    dim_f = sum(f.dim for f in factors)
    r = e.rank
    if dim_f - r != 3:
        raise ValueError(f"dim F - rank E = {dim_f - r}, expected 3")
    w = omega_x_dual(factors, e)
    ed = bwb.dual(e)
    wedges = [bwb.exterior_power(ed, j) for j in range(r + 1)] if r else [bwb.BundleExpr.trivial(factors)]
    chase = _Chase(trace)
    first_parts = []
    for s, m in ed.terms:
        g = bwb.tensor(bwb.BundleExpr.irreducible(s), w)
        amb = [bwb.cohomology(factors, bwb.tensor(wj, g)) for wj in wedges]
        first_parts.append(_scaled(chase.restrict(amb, 3, f"E^dual summand {s}"), m))
    first = sum_terms(first_parts) if first_parts else [0, 0, 0, 0]
    second_parts = []
    for s, m in bwb.ambient_cotangent(factors).terms:
        g = bwb.tensor(bwb.BundleExpr.irreducible(s), w)
        amb = [bwb.cohomology(factors, bwb.tensor(wj, g)) for wj in wedges]
        second_parts.append(_scaled(chase.restrict(amb, 3, f"Omega^1 summand {s}"), m))
    second = sum_terms(second_parts)
    chi = chi_wedge2_tangent(rec) if rec is not None else None
    result = chase.conormal(first, second, chi)
    return chase.solve(result)


# ---------------------------------------------------------------------------
# blowups and special recipes


def blowup_reduce(y_cohomology: CohVector, z_restriction: CohVector) -> tuple[ChaseProblem, list[str]]:
    """Register 0 -> G (x) I_Z -> G -> G|_Z -> 0 for G = Omega^1_Y (x) omega_Y^dual.

    By the blowup identification the solved vector is H^*(X, wedge^2 T_X).
    """
    prob = ChaseProblem()
    result = [prob.var(f"h{i}(G*I_Z)") for i in range(len(y_cohomology))]
    prob.add_ses(result, list(y_cohomology), list(z_restriction), label="ideal sheaf of Z")
    return prob, result


def _check(label: str, expected, got) -> None:
    if isinstance(expected, tuple) and isinstance(got, CohVector):
        ok = got == expected
    else:
        ok = expected == got
    if not ok:
        raise AnchorMismatch(label, expected, got)


def weighted_ci_hilbert(weights: Sequence[int], degrees: Sequence[int], k: int) -> int:
    """Coefficient of t^k in prod(1 - t^d) / prod(1 - t^w)."""
    series = [0] * (k + 1)
    series[0] = 1
    for w in weights:
        for i in range(w, k + 1):
            series[i] += series[i - w]
    for d in degrees:
        for i in range(k, d - 1, -1):
            series[i] -= series[i - d]
    return series[k]


@dataclass(frozen=True)
class _DoubleStepData:
    weights: tuple[int, ...]
    degree: int
    h3_anchor: int
    restriction_anchor: tuple[int, ...]
    hodge_anchor: tuple[int, ...]
    alpha_offset: int
    step1_difference: int
    y_data: tuple[int, ...]
    z_data: int
    blow_difference: int
    blow_h2: int


_DOUBLE_STEP = {
    "M2-1": _DoubleStepData((1, 1, 1, 2, 3), 6, 14, (0, 0, 0, 1), (0, 2, 21, 0, 0), 13, 5, (3, 0, 7, 0), 4, -1, 7),
    "M2-3": _DoubleStepData((1, 1, 1, 1, 2), 4, 4, (0, 0, 0, 0), (0, 2, 10, 0, 0), 4, -2, (6, 0, 1, 0), 8, -2, 1),
}


def _difference_bounds(prob: ChaseProblem, coeffs: dict, label: str) -> tuple[int, int | None]:
    big = 10 ** 6
    v = prob.var(label, lo=-big)
    d = dict(coeffs)
    d[v] = -1
    prob.add_linear(d, 0)
    return prob.solve([v]).bounds[v]


def _wps(weights: Sequence[int]) -> tuple[toric.Fan, toric.DivisorClassLattice]:
    return toric.fan_from_weights([list(weights)], [1], name=f"P{tuple(weights)}")


def _hypersurface_cotangent(
    chase: _Chase, cache: _ToricCache, degree: int, twist: int, label: str
) -> tuple[list[Term], list[Term], list[str]]:
    """Terms for 0 -> O_Y(t-d) -> Omega^1_P(t)|_Y -> Omega^1_Y(t) -> 0 with Y of degree d."""
    first, second = _toric_conormal_terms(chase, cache, [(degree,)], (twist,), label)
    result = [chase.prob.var(f"h{i}(Omega1_Y({twist}))") for i in range(4)]
    chase.prob.add_ses(list(first), list(second), result, label=f"conormal of Y twisted by {twist}")
    return first, second, result


def _double_step(tag: str, rec: ClassificationRecord | None, trace: list | None) -> CohVector:
    data = _DOUBLE_STEP[tag]
    fan, lattice = _wps(data.weights)
    cache = _ToricCache(fan, lattice)

    # first step: X is a (1,1) divisor in F = Y x P^1
    chase = _Chase(trace)
    first, second, om1 = _hypersurface_cotangent(chase, cache, data.degree, 1, "Y, twist 1: ")
    _check("h^3(Y, O_Y(1 - d))", data.h3_anchor, first[3])
    _check("h^*(P, Omega^1(1)|_Y)", data.restriction_anchor, tuple(second))
    prob = chase.prob
    low = prob.solve(om1[:2]).vector(om1[:2])
    _check("h^0, h^1 of Omega^1_Y(1)", (0, 0), low)
    diff = _difference_bounds(prob, {om1[2]: 1, om1[3]: -1}, "alpha offset")
    _check("h^2 - h^3 of Omega^1_Y(1)", (data.alpha_offset, data.alpha_offset), diff)

    # Hodge numbers of Y from the untwisted conormal sequence
    hodge = _Chase(None)
    _, _, om0 = _hypersurface_cotangent(hodge, cache, data.degree, 0, "Y, untwisted: ")
    hodge.prob.add_equal(om0[0], 0)
    hodge.prob.add_equal(om0[3], 0)
    hy = hodge.prob.solve(om0).vector(om0)
    h_f = kunneth(hy, CohVector([1, 0])) + kunneth(CohVector([1, 0, 0, 0]), CohVector([0, 1]))
    chase.log("h^*(F, Omega^1_F)", h_f)
    _check("h^*(F, Omega^1_F)", data.hodge_anchor, h_f)

    # Omega^1_F(1,1) = Omega^1_Y(1) [x] O(1) + O_Y(1) [x] O(-1); the second summand is acyclic
    mid = _scaled(om1, 2) + [0]
    rest = [prob.var(f"h{i}(Omega1_F(1,1)|X)") for i in range(5)]
    prob.add_ses(list(h_f.values()), mid, rest, label="(1,1) divisor")
    prob.add_equal(rest[4], 0)
    wedge = [prob.var(f"h{i}(wedge2T)") for i in range(4)]
    prob.add_ses([1, 0, 0, 0], rest[:4], wedge, label="conormal of X in F")
    prob.add_equal(wedge[3], 0)
    lo, hi = prob.solve([rest[0]]).bounds[rest[0]]
    _check("h^0(F, Omega^1_F(1,1)|_X)", (2, 2), (lo, hi))
    _check("h^0(wedge^2 T_X) from the first step", (1, 1), prob.solve([wedge[0]]).bounds[wedge[0]])
    step1 = _difference_bounds(prob, {wedge[2]: 1, wedge[1]: -1}, "h2-h1")
    _check("h^2 - h^1 from the first step", (data.step1_difference, data.step1_difference), step1)

    # second step: blowup of Y along the elliptic curve Z
    ychase = _Chase(trace)
    _, _, om2 = _hypersurface_cotangent(ychase, cache, data.degree, 2, "Y, twist 2: ")
    ychase.prob.add_equal(om2[3], 0)
    y_data = ychase.solve(om2)
    _check("h^*(Y, Omega^1_Y (x) omega_Y^dual)", data.y_data, y_data)
    z0 = 2 * weighted_ci_hilbert(data.weights, (1, 1, data.degree), 1) + weighted_ci_hilbert(
        data.weights, (1, 1, data.degree), 2
    )
    _check("h^0(Z, (Omega^1_Y (x) omega_Y^dual)|_Z)", data.z_data, z0)
    z_data = CohVector([z0, 0, 0, 0])
    chase.log("h^*(Z, restriction)", z_data)
    bprob, bres = blowup_reduce(y_data, z_data)
    diff = _difference_bounds(bprob, {bres[0]: 1, bres[1]: -1}, "h0-h1")
    _check("h^0 - h^1 from the blowup", (data.blow_difference, data.blow_difference), diff)
    _check("h^2 from the blowup", (data.blow_h2, data.blow_h2), bprob.solve([bres[2]]).bounds[bres[2]])

    # combine both steps on the same unknowns
    final = ChaseProblem()
    res = [final.var(f"h{i}(wedge2T)") for i in range(4)]
    final.add_equal(res[0], 1)
    final.add_linear({res[2]: 1, res[1]: -1}, data.step1_difference)
    final.add_linear({res[0]: 1, res[1]: -1}, data.blow_difference)
    final.add_equal(res[2], data.blow_h2)
    final.add_equal(res[3], 0)
    out = final.solve(res).vector(res)
    chase.log("wedge^2 T_X", out)
    return out


def _m1_1(trace: list | None) -> CohVector:
    fan, lattice = _wps((1, 1, 1, 1, 3))
    chase = _Chase(trace)
    first, second = _toric_conormal_terms(chase, _ToricCache(fan, lattice), [(6,)], (1,))
    prob = chase.prob
    res = [prob.var(f"h{i}(wedge2T)") for i in range(4)]
    prob.add_ses(list(first), list(second), res, label="conormal")
    _check("h^0, h^1 before the vanishing pin", (0, 0), prob.solve(res[:2]).vector(res[:2]))
    diff = _difference_bounds(prob, {res[2]: 1, res[3]: -1}, "a")
    _check("h^2 - h^3 before the vanishing pin", (35, 35), diff)
    prob.add_equal(res[3], 0)
    return chase.solve(res)


def _m4_13(trace: list | None) -> CohVector:
    p1 = toric.projective_space(1)
    surf = toric.product(p1, p1)
    lattice = toric.DivisorClassLattice.from_fan(surf, [[1, 1, 0, 0], [0, 0, 1, 1]])
    tridegree = (1, 1, 3)
    total = CohVector.zero(3)
    for i, j in itertools.combinations(range(3), 2):
        # the image of Z in the (i, j) factor is a divisor of bidegree (d_j, d_i)
        image = (tridegree[j], tridegree[i])
        twist = (2 - image[0], 2 - image[1])
        h = toric.line_bundle_cohomology(surf, lattice.representative_of(twist))
        if trace is not None:
            trace.append((f"O(2,2) (x) I_Z{i + 1}{j + 1} = O{twist}", h))
        total = total + h
    _check("sum over the three projections", (4, 0, 0), total)
    return total.padded(4)


def _m10_1(trace: list | None) -> CohVector:
    h0t, h1t, h0w = surface_table("Bl8")
    tangent_p1 = CohVector([3, 0])
    out = kunneth(tangent_p1, CohVector([h0t, h1t, 0])) + kunneth(CohVector([1, 0]), CohVector([h0w, 0, 0]))
    if trace is not None:
        trace.append(("T_P1 [x] T_S", kunneth(tangent_p1, CohVector([h0t, h1t, 0]))))
        trace.append(("O [x] omega_S^dual", kunneth(CohVector([1, 0]), CohVector([h0w, 0, 0]))))
    return out.padded(4)


def special_case(tag: str, rec: ClassificationRecord | None = None, trace: list | None = None) -> CohVector:
    if tag == "M1-1":
        return _m1_1(trace)
    if tag in _DOUBLE_STEP:
        return _double_step(tag, rec, trace)
    if tag == "M4-13":
        return _m4_13(trace)
    if tag == "M10-1":
        return _m10_1(trace)
    raise ValueError(f"unknown special recipe {tag!r}")


# ---------------------------------------------------------------------------
# del Pezzo surfaces

SURFACES = {
    "P2": (9, (8, 0, 10)),
    "P1xP1": (8, (6, 0, 9)),
    **{f"Bl{k}": (9 - k, t) for k, t in zip(range(1, 9), [
        (6, 0, 9), (4, 0, 8), (2, 0, 7), (0, 0, 6), (0, 2, 5), (0, 4, 4), (0, 6, 3), (0, 8, 2)])},
}


def surface_degree(name: str) -> int:
    return SURFACES[_surface_key(name)][0]


def _surface_key(name: str) -> str:
    key = name.replace("²", "2").replace("¹", "1").replace("×", "x").replace(" ", "")
    key = key.replace("P^2", "P2").replace("P^1", "P1")
    if key.startswith("Bl") and key.endswith("P2"):
        key = key[:-2]
    if key.startswith("Bl_"):
        key = "Bl" + key[3:]
    if key not in SURFACES:
        raise ValueError(f"unknown del Pezzo surface {name!r}")
    return key


def surface_table(name: str) -> tuple[int, int, int]:
    """(h^0 T_S, h^1 T_S, h^0 omega_S^dual), checked against surface Riemann-Roch."""
    k2, triple = SURFACES[_surface_key(name)]
    h0t, h1t, h0w = triple
    if h0t - h1t != 2 * k2 - 10 or h0w != k2 + 1:
        raise ConsistencyError(f"{name}: stored triple {triple} violates Riemann-Roch")
    return triple


# ---------------------------------------------------------------------------
# dispatch


def engine_vector(model: FamilyModel, rec: ClassificationRecord | None, trace: list | None = None) -> CohVector:
    data = model.data
    if isinstance(data, ToricModel):
        return toric_ci(data.fan, data.lattice, data.sections, rec, trace)
    if isinstance(data, HomogeneousModel):
        return homogeneous_ci(data.factors, data.expr, rec, trace)
    return special_case(data.tag, rec, trace)


def compute(model: FamilyModel, rec: ClassificationRecord, keep_trace: bool = True) -> ComputationReport:
    """Run the model's engine and assemble the parallelogram with all Euler-characteristic checks."""
    if model.id != rec.id:
        raise ValueError(f"model for {model.id} used with record {rec.id}")
    trace: list = []
    try:
        wedge2 = engine_vector(model, rec, trace)
    except Infeasible as exc:
        exc.trace = list(exc.trace) + [f"{label}: {vec}" for label, vec in trace]
        raise
    wedge2 = wedge2.padded(4)
    if wedge2[3] != 0 and isinstance(wedge2[3], int):
        raise ConsistencyError(f"{rec.id}: h^3(wedge^2 T) = {wedge2[3]} is nonzero")
    pv01, pv11 = h_tangent(rec)
    pv03 = chi_anticanonical(rec)
    if wedge2.is_known:
        pg = assemble_parallelogram(rec, wedge2)
        return ComputationReport(rec.id, model.kind, wedge2, pg.as_tuple(), True,
                                 trace if keep_trace else [], chi_checks(rec, pg))
    entries = (pv01, pv11, wedge2[0], wedge2[1], wedge2[2], pv03)
    return ComputationReport(rec.id, model.kind, wedge2, entries, False, trace if keep_trace else [], None)


PREFERENCE = ("special", "toric", "homogeneous")


def candidate_models(models: Sequence[FamilyModel], engine: str = "auto") -> list[FamilyModel]:
    """Models to try in order: special recipes first, then toric, then homogeneous."""
    if engine != "auto":
        if engine not in ENGINES:
            raise ValueError(f"unknown engine {engine!r}")
        out = [m for m in models if m.kind == engine]
        if not out:
            raise NoModel(f"no {engine} model")
        return out
    out = [m for kind in PREFERENCE for m in models if m.kind == kind]
    if not out:
        raise NoModel("no model")
    return out


def choose_model(models: Sequence[FamilyModel], engine: str = "auto") -> FamilyModel:
    return candidate_models(models, engine)[0]


def compute_best(models: Sequence[FamilyModel], rec: ClassificationRecord, engine: str = "auto",
                 keep_trace: bool = True) -> ComputationReport:
    """First determined result among the candidate models.

    An underdetermined model does not stop the search; if no model pins
    every entry the first underdetermined report is returned.
    """
    fallback = None
    for m in candidate_models(models, engine):
        report = compute(m, rec, keep_trace)
        if report.determined:
            return report
        fallback = fallback or report
    return fallback


def poisson_bivector_absence(report: ComputationReport) -> bool:
    """True iff there is no nonzero global bivector field."""
    return report.parallelogram.pv02 == 0
