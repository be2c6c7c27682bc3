"""Line bundle and twisted cotangent cohomology on complete toric varieties.

Cohomology of a torus-equivariant sheaf splits over characters m of the torus.
On the affine chart of a cone tau the m-graded piece of a reflexive sheaf
O(D) or Omega^1(D) is a subspace W_tau(m) of a fixed vector space, and the
Cech complex collapses to a cellular complex over the cones of the fan, with
cones of dimension d - p in degree p. W_tau(m) depends on m only through
which rays are "bad" (<m,u_r> < -a_r) and, for Omega^1, which are "tight"
(<m,u_r> = -a_r). For each pattern with nonzero cohomology the characters
realising it form a bounded polytope, which we enumerate exactly.

Fans need not be simplicial; non-simplicial cones enter through their face
lattice. On simplicial fans the line bundle patterns agree with the classical
description by reduced cohomology of full subcomplexes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor, gcd
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .cohvector import CohVector
from .errors import IncompleteFan, NonCartier


def _primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


@dataclass(frozen=True)
class Fan:
    """A complete fan given by primitive rays and full-dimensional maximal cones.

    Maximal cones are sets of ray indices. Simplicial cones have exactly
    ``dim`` rays; non-simplicial cones are accepted and handled through their
    face lattice.
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        for r in rays:
            if len(r) != self.dim:
                raise ValueError(f"ray {r} does not live in Z^{self.dim}")
            if not _primitive(r):
                raise ValueError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise ValueError("repeated ray")
        for c in cones:
            if len(c) < self.dim or len(set(c)) != len(c):
                raise ValueError(f"cone {c} is not full-dimensional")
            if any(not 0 <= i < len(rays) for i in c):
                raise ValueError(f"cone {c} references an unknown ray")
            if linalg.rank([rays[i] for i in c]) != self.dim:
                raise ValueError(f"cone {c} is not full-dimensional")

    @property
    def nrays(self) -> int:
        return len(self.rays)

    @property
    def simplicial(self) -> bool:
        return all(len(c) == self.dim for c in self.max_cones)

    def _cone_rank(self, cone: Sequence[int]) -> int:
        return linalg.rank([self.rays[i] for i in cone]) if cone else 0

    def _facets(self, cone: tuple[int, ...]) -> list[tuple[tuple[int, ...], list[int]]]:
        """Facets of a full-dimensional cone with integral inward normals."""
        out = {}
        for sub in itertools.combinations(cone, self.dim - 1):
            rows = [self.rays[i] for i in sub]
            if linalg.rank(rows) != self.dim - 1:
                continue
            normal = linalg._integral_row(linalg.nullspace(rows, self.dim)[0])
            vals = [sum(x * y for x, y in zip(normal, self.rays[i])) for i in cone]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                normal = [-x for x in normal]
            else:
                continue
            face = tuple(i for i in cone if sum(x * y for x, y in zip(normal, self.rays[i])) == 0)
            out[face] = normal
        return list(out.items())

    @cached_property
    def faces(self) -> list[list[tuple[int, ...]]]:
        """All cones of the fan, grouped by dimension (index 0 is the zero cone)."""
        found: set[tuple[int, ...]] = set()
        for c in self.max_cones:
            if len(c) == self.dim:
                for k in range(self.dim + 1):
                    found.update(itertools.combinations(c, k))
                continue
            level = {c}
            found.add(c)
            facets = [set(f) for f, _ in self._facets(c)]
            while level:
                nxt = set()
                for f in level:
                    for g in facets:
                        h = tuple(sorted(set(f) & g))
                        if h != f and h not in found:
                            nxt.add(h)
                found.update(nxt)
                level = nxt
            found.add(())
        by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(self.dim + 1)]
        for f in found:
            by_dim[self._cone_rank(f)].append(f)
        for lst in by_dim:
            lst.sort()
        return by_dim

    @cached_property
    def _orientation(self) -> dict[tuple[int, ...], tuple[list[list[int]], list[int]]]:
        """Per cone: an ordered basis of its span (chosen among its rays) and a set of
        coordinate rows on which that basis has a nonzero minor."""
        out = {}
        for lst in self.faces:
            for tau in lst:
                basis: list[list[int]] = []
                for i in tau:
                    trial = basis + [list(self.rays[i])]
                    if linalg.rank(trial) == len(trial):
                        basis = trial
                rows = []
                if basis:
                    for sel in itertools.combinations(range(self.dim), len(basis)):
                        if linalg.det([[b[k] for b in basis] for k in sel]) != 0:
                            rows = list(sel)
                            break
                out[tau] = (basis, rows)
        return out

    def incidence(self, tau: tuple[int, ...], face: tuple[int, ...]) -> int:
        """Sign relating the orientation of a facet ``face`` of ``tau`` to that of ``tau``."""
        basis, rows = self._orientation[tau]
        fbasis, _ = self._orientation[face]
        v = next(list(self.rays[i]) for i in tau if i not in face)
        new = fbasis + [v]
        d1 = linalg.det([[b[k] for b in basis] for k in rows])
        d2 = linalg.det([[b[k] for b in new] for k in rows])
        return 1 if d1 * d2 > 0 else -1

    @cached_property
    def _cell_structure(self) -> list[list[tuple[tuple[int, ...], list[tuple[tuple[int, ...], int]]]]]:
        """For each dimension k, the cones of dimension k with their signed facets."""
        out = []
        for k in range(self.dim + 1):
            row = []
            lower = self.faces[k - 1] if k > 0 else []
            for tau in self.faces[k]:
                st = set(tau)
                facets = [(f, self.incidence(tau, f)) for f in lower if set(f) <= st]
                row.append((tau, facets))
            out.append(row)
        return out

    @cached_property
    def _max_cone_normals(self) -> dict[tuple[int, ...], list[list[int]]]:
        return {c: [n for _, n in self._facets(c)] for c in self.max_cones}

    def cone_containing(self, v: Sequence[int]) -> tuple[int, ...] | None:
        for c, normals in self._max_cone_normals.items():
            if all(sum(x * y for x, y in zip(n, v)) >= 0 for n in normals):
                return c
        return None

    def check_complete(self, probes: int = 64, seed: int = 0) -> None:
        """Raise IncompleteFan unless every facet of a maximal cone is shared by
        exactly two maximal cones and a set of probe vectors is covered."""
        if getattr(self, "_complete_ok", False):
            return
        walls: dict[tuple[int, ...], int] = {}
        for c in self.max_cones:
            for f, _ in self._facets(c):
                walls[f] = walls.get(f, 0) + 1
        bad = [r for r, k in walls.items() if k != 2]
        if bad:
            raise IncompleteFan(f"wall {bad[0]} lies in {walls[bad[0]]} maximal cone(s)")
        vecs = [list(r) for r in self.rays] + [[-x for x in r] for r in self.rays]
        vecs += [[int(i == j) * s for j in range(self.dim)] for i in range(self.dim) for s in (1, -1)]
        rng = random.Random(seed)
        vecs += [[rng.randint(-7, 7) for _ in range(self.dim)] for _ in range(probes)]
        for v in vecs:
            if self.cone_containing(v) is None:
                raise IncompleteFan(f"probe vector {tuple(v)} lies in no cone")
        object.__setattr__(self, "_complete_ok", True)

    @cached_property
    def _vertex_solvers(self) -> list[tuple[tuple[int, ...], list[list[Fraction]]]]:
        out = []
        for sub in itertools.combinations(range(self.nrays), self.dim):
            rows = [[Fraction(x) for x in self.rays[i]] for i in sub]
            inv = _invert(rows)
            if inv is not None:
                out.append((sub, inv))
        return out

    @cached_property
    def _ray_array(self) -> np.ndarray:
        return np.array(self.rays, dtype=np.int64)

    @cached_property
    def line_patterns(self) -> dict[int, tuple[int, ...]]:
        """Map bad-ray bitmask S -> per-character cohomology of O(D) when N(m) = S (nonzero only)."""
        out = {}
        for mask in range(1 << self.nrays):
            h = cellular_cohomology(self, mask, 0, cotangent=False)
            if any(h):
                out[mask] = h
        return out

    def simplicial_reduced_cohomology(self, mask: int) -> tuple[int, ...]:
        """Reduced cohomology (degrees -1..d-1) of the full subcomplex on ``mask``; simplicial fans only."""
        if not self.simplicial:
            raise ValueError("full subcomplexes are only defined for simplicial fans")
        faces = [[f for f in lst if all(mask >> i & 1 for i in f)] for lst in self.faces]
        ranks = []
        for k in range(self.dim):
            src, dst = faces[k], faces[k + 1]
            index = {f: j for j, f in enumerate(src)}
            rows = []
            for g in dst:
                row = [0] * len(src)
                for pos in range(len(g)):
                    row[index[g[:pos] + g[pos + 1:]]] = (-1) ** pos
                rows.append(row)
            ranks.append(linalg.rank(rows) if rows and src else 0)
        dims = []
        for k in range(self.dim + 1):
            r_out = ranks[k] if k < self.dim else 0
            r_in = ranks[k - 1] if k > 0 else 0
            dims.append(len(faces[k]) - r_out - r_in)
        return tuple(dims)


_CELL_CACHE: dict = {}


def cellular_cohomology(fan: Fan, bad: int, tight: int, cotangent: bool) -> tuple[int, ...]:
    """Cohomology of the cellular complex of O(D) or Omega^1(D) at one character.

    The character enters only through the bad rays (<m,u> < -a) and, for the
    cotangent sheaf, the tight rays (<m,u> = -a). The complex has the cones of
    dimension d - p in degree p and signed restriction maps to facets.
    """
    key = (fan, bad, tight if cotangent else 0, cotangent)
    hit = _CELL_CACHE.get(key)
    if hit is not None:
        return hit
    d = fan.dim
    bases: dict[tuple[int, ...], list[list[int]]] = {}
    for lst in fan.faces:
        for tau in lst:
            if any(bad >> i & 1 for i in tau):
                continue
            if not cotangent:
                bases[tau] = [[1]]
                continue
            rows = [fan.rays[i] for i in tau if tight >> i & 1]
            if rows:
                bases[tau] = [linalg._integral_row(v) for v in linalg.nullspace(rows, d)]
            else:
                bases[tau] = [[int(i == j) for i in range(d)] for j in range(d)]
    width = d if cotangent else 1
    cells = fan._cell_structure
    dims = [sum(len(bases[t]) for t, _ in cells[d - p] if t in bases) for p in range(d + 1)]
    ranks = []
    for p in range(d):
        dst = [t for t, _ in cells[d - p - 1] if t in bases]
        offset = {t: i * width for i, t in enumerate(dst)}
        size = len(dst) * width
        cols = []
        for tau, facets in cells[d - p]:
            if tau not in bases:
                continue
            for vec in bases[tau]:
                col = [0] * size
                for face, sign in facets:
                    o = offset.get(face)
                    if o is None:
                        continue
                    for j in range(width):
                        col[o + j] += sign * vec[j]
                cols.append(col)
        ranks.append(linalg.rank(cols) if cols and size else 0)
    out = []
    for p in range(d + 1):
        r_out = ranks[p] if p < d else 0
        r_in = ranks[p - 1] if p > 0 else 0
        out.append(dims[p] - r_out - r_in)
    res = tuple(out)
    _CELL_CACHE[key] = res
    return res


def _invert(rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(rows)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = linalg.solve_square(rows, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class TorusDivisor:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(x) for x in self.coeffs))

    def __add__(self, other: TorusDivisor) -> TorusDivisor:
        return TorusDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __sub__(self, other: TorusDivisor) -> TorusDivisor:
        return TorusDivisor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __neg__(self) -> TorusDivisor:
        return TorusDivisor(tuple(-a for a in self.coeffs))

    def __len__(self):
        return len(self.coeffs)


def _coeffs(fan: Fan, D) -> tuple[int, ...]:
    a = D.coeffs if isinstance(D, TorusDivisor) else tuple(int(x) for x in D)
    if len(a) != fan.nrays:
        raise ValueError(f"divisor has {len(a)} coefficients but the fan has {fan.nrays} rays")
    return a


def anticanonical(fan: Fan) -> TorusDivisor:
    return TorusDivisor((1,) * fan.nrays)


def ray_divisor(fan: Fan, i: int) -> TorusDivisor:
    return TorusDivisor(tuple(int(j == i) for j in range(fan.nrays)))


# ---------------------------------------------------------------------------
# class group


@dataclass(frozen=True)
class DivisorClassLattice:
    """Cl(F) = Z^rays / M, with an integral projection and a section of it."""

    class_rank: int
    projection: tuple[tuple[int, ...], ...]
    lift: tuple[tuple[int, ...], ...]

    @classmethod
    def from_fan(cls, fan: Fan, projection: Sequence[Sequence[int]] | None = None) -> DivisorClassLattice:
        n, d = fan.nrays, fan.dim
        D, S, _ = linalg.smith(fan.rays)
        diag = [D[i][i] for i in range(d)]
        if any(abs(x) != 1 for x in diag):
            raise ValueError(f"class group has torsion (Smith invariants {diag})")
        s_inv = linalg.inverse_unimodular(S)
        p_snf = [list(row) for row in S[d:]]
        lift = [row[d:] for row in s_inv]
        if projection is not None:
            p_user = [list(map(int, row)) for row in projection]
            if len(p_user) != n - d or any(len(r) != n for r in p_user):
                raise ValueError(f"class projection must be a {n - d} x {n} matrix")
            if any(any(x for x in row) for row in linalg.matmul(p_user, fan.rays)):
                raise ValueError("class projection does not kill the character lattice")
            g = linalg.matmul(p_user, lift)
            if abs(linalg.det(g)) != 1:
                raise ValueError("class projection is not onto the class group")
            lift = linalg.matmul(lift, linalg.inverse_unimodular(g))
            p_snf = p_user
        return cls(n - d, tuple(map(tuple, p_snf)), tuple(map(tuple, lift)))

    def class_of(self, D) -> tuple[int, ...]:
        a = D.coeffs if isinstance(D, TorusDivisor) else tuple(D)
        return tuple(sum(p * x for p, x in zip(row, a, strict=True)) for row in self.projection)

    def representative_of(self, c: Sequence[int]) -> TorusDivisor:
        if len(c) != self.class_rank:
            raise ValueError(f"class vector must have length {self.class_rank}")
        return TorusDivisor(tuple(sum(row[j] * c[j] for j in range(self.class_rank)) for row in self.lift))


def class_of(lattice: DivisorClassLattice, D) -> tuple[int, ...]:
    return lattice.class_of(D)


def representative_of(lattice: DivisorClassLattice, c: Sequence[int]) -> TorusDivisor:
    return lattice.representative_of(c)


# ---------------------------------------------------------------------------
# characters and line bundles


def _pattern_box(fan: Fan, lo: Sequence[int | None], hi: Sequence[int | None]) -> list[tuple[int, int]] | None:
    """Integer bounding box of {m : lo_r <= <m,u_r> <= hi_r}, found from the vertices.

    The rays span the lattice, so the polyhedron is pointed and its vertices
    bound it whenever it is bounded. An unbounded region with integral points
    would carry infinitely many characters, which cannot happen for a
    pattern with nonzero cohomology on a complete variety.
    """
    lo_f = [-(10 ** 9) if x is None else x for x in lo]
    hi_f = [10 ** 9 if x is None else x for x in hi]
    box_lo = [None] * fan.dim
    box_hi = [None] * fan.dim
    found = False
    for sub, inv in fan._vertex_solvers:
        for choice in itertools.product(*[[x for x in (lo[i], hi[i]) if x is not None] for i in sub]):
            m = [sum(row[k] * choice[k] for k in range(fan.dim)) for row in inv]
            ok = True
            for i, u in enumerate(fan.rays):
                val = sum(x * y for x, y in zip(m, u))
                if val < lo_f[i] or val > hi_f[i]:
                    ok = False
                    break
            if not ok:
                continue
            found = True
            for k in range(fan.dim):
                box_lo[k] = m[k] if box_lo[k] is None else min(box_lo[k], m[k])
                box_hi[k] = m[k] if box_hi[k] is None else max(box_hi[k], m[k])
    if not found:
        return None
    return [(ceil(l), floor(h)) for l, h in zip(box_lo, box_hi)]


def _points_in_box(fan: Fan, box: list[tuple[int, int]] | None) -> np.ndarray:
    if box is None or any(l > h for l, h in box):
        return np.zeros((0, fan.dim), dtype=np.int64)
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in box]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, fan.dim)


def _masks(fan: Fan, a: Sequence[int], pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vals = pts @ fan._ray_array.T
    neg = -np.asarray(a, dtype=np.int64)
    weights = 1 << np.arange(fan.nrays, dtype=np.int64)
    bad = (vals < neg).astype(np.int64) @ weights
    tight = (vals == neg).astype(np.int64) @ weights
    return bad, tight


def _points_with_pattern(fan: Fan, a: Sequence[int], mask: int) -> np.ndarray:
    lo = [None if mask >> i & 1 else -ai for i, ai in enumerate(a)]
    hi = [-ai - 1 if mask >> i & 1 else None for i, ai in enumerate(a)]
    pts = _points_in_box(fan, _pattern_box(fan, lo, hi))
    if not len(pts):
        return pts
    bad, _ = _masks(fan, a, pts)
    return pts[bad == mask]


def character_contributions(fan: Fan, D) -> list[tuple[tuple[int, ...], int, int]]:
    """All (m, degree, dim) with H^degree(O(D))_m of dimension dim > 0."""
    fan.check_complete()
    a = _coeffs(fan, D)
    out = []
    for mask, h in fan.line_patterns.items():
        pts = _points_with_pattern(fan, a, mask)
        if not len(pts):
            continue
        for p, dim in enumerate(h):
            if dim:
                out.extend((tuple(int(x) for x in m), p, dim) for m in pts)
    return out


def line_bundle_cohomology(fan: Fan, D) -> CohVector:
    """Dimensions of H^*(F, O(D)) for a torus-invariant Weil divisor D (the reflexive rank-one sheaf)."""
    fan.check_complete()
    a = _coeffs(fan, D)
    total = [0] * (fan.dim + 1)
    for mask, h in fan.line_patterns.items():
        k = len(_points_with_pattern(fan, a, mask))
        if k:
            for p, dim in enumerate(h):
                total[p] += k * dim
    return CohVector(total)


def section_basis(fan: Fan, D) -> list[tuple[int, ...]]:
    fan.check_complete()
    a = _coeffs(fan, D)
    return sorted(tuple(int(x) for x in m) for m in _points_with_pattern(fan, a, 0))


def cartier_data(fan: Fan, D) -> dict[tuple[int, ...], list[Fraction] | None]:
    """Per maximal cone, the rational character m_sigma with <m_sigma,u_r> = -a_r on sigma.

    The entry is None when no such character exists (D is not Q-Cartier there).
    """
    a = _coeffs(fan, D)
    out = {}
    for c in fan.max_cones:
        basis = []
        for i in c:
            if linalg.rank([fan.rays[j] for j in basis + [i]]) == len(basis) + 1:
                basis.append(i)
        m = linalg.solve_square([fan.rays[i] for i in basis], [-a[i] for i in basis])
        if any(sum(x * y for x, y in zip(m, fan.rays[i])) != -a[i] for i in c):
            m = None
        out[c] = m
    return out


def is_cartier(fan: Fan, D) -> bool:
    return all(m is not None and all(x.denominator == 1 for x in m) for m in cartier_data(fan, D).values())


def is_nef(fan: Fan, D) -> bool:
    """Nef test for Q-Cartier D: each local character m_sigma satisfies <m_sigma,u_r> >= -a_r for all rays."""
    a = _coeffs(fan, D)
    for m in cartier_data(fan, D).values():
        if m is None:
            raise NonCartier(f"divisor {tuple(a)} is not Q-Cartier")
        for i, u in enumerate(fan.rays):
            if sum(x * y for x, y in zip(m, u)) < -a[i]:
                return False
    return True


def require_cartier(fan: Fan, D) -> None:
    if not is_cartier(fan, D):
        raise NonCartier(f"divisor {tuple(_coeffs(fan, D))} is not Cartier")


# ---------------------------------------------------------------------------
# reflexive cotangent sheaf


def _status_masks(fan: Fan, a: Sequence[int], m: Sequence[int]) -> tuple[int, int]:
    bad = tight = 0
    for i, u in enumerate(fan.rays):
        v = sum(x * y for x, y in zip(m, u))
        if v < -a[i]:
            bad |= 1 << i
        elif v == -a[i]:
            tight |= 1 << i
    return bad, tight


def cotangent_characters(fan: Fan, D) -> set[tuple[int, ...]]:
    """Characters at which Omega^1(D) can have cohomology on a simplicial fan.

    There the Euler sequence is exact in every degree, so the support lies in
    the union of the supports of O(D) and the O(D - D_r).
    """
    a = _coeffs(fan, D)
    chars = {m for m, _, _ in character_contributions(fan, a)}
    for i in range(fan.nrays):
        shifted = list(a)
        shifted[i] -= 1
        chars.update(m for m, _, _ in character_contributions(fan, shifted))
    return chars


def _cotangent_patterns(fan: Fan) -> list[tuple[int, int, tuple[int, ...]]]:
    """Every (bad, tight) pair of ray masks whose cellular complex has cohomology."""
    cached = getattr(fan, "_cot_patterns", None)
    if cached is not None:
        return cached
    out = []
    for status in itertools.product(range(3), repeat=fan.nrays):
        bad = sum(1 << i for i, s in enumerate(status) if s == 1)
        tight = sum(1 << i for i, s in enumerate(status) if s == 2)
        h = cellular_cohomology(fan, bad, tight, cotangent=True)
        if any(h):
            out.append((bad, tight, h))
    object.__setattr__(fan, "_cot_patterns", out)
    return out


def cotangent_twist_cohomology(fan: Fan, D, pins: dict | None = None, method: str = "cellular") -> CohVector:
    """Dimensions of H^*(F, Omega^1 (x) O(D)) for the reflexive cotangent sheaf.

    ``method="cellular"`` is exact and works on any complete fan.
    ``method="euler"`` only uses the twisted Euler sequence, degree-0 map
    ranks and the optional ``pins`` (a dict with keys ``chi`` and/or
    ``vanishing``), may return bounded unknowns, and needs a simplicial fan.
    """
    fan.check_complete()
    a = _coeffs(fan, D)
    if method == "euler":
        if not fan.simplicial:
            raise ValueError("the Euler-sequence route needs a simplicial fan")
        return _cotangent_via_euler(fan, a, pins or {})
    if method != "cellular":
        raise ValueError(f"unknown method {method!r}")
    total = [0] * (fan.dim + 1)
    if fan.simplicial:
        for m in cotangent_characters(fan, a):
            h = cellular_cohomology(fan, *_status_masks(fan, a, m), cotangent=True)
            for p, x in enumerate(h):
                total[p] += x
        return CohVector(total)
    for bad, tight, h in _cotangent_patterns(fan):
        lo, hi = [], []
        for i, ai in enumerate(a):
            if bad >> i & 1:
                lo.append(None)
                hi.append(-ai - 1)
            elif tight >> i & 1:
                lo.append(-ai)
                hi.append(-ai)
            else:
                lo.append(-ai + 1)
                hi.append(None)
        pts = _points_in_box(fan, _pattern_box(fan, lo, hi))
        if not len(pts):
            continue
        b, t = _masks(fan, a, pts)
        k = int(np.count_nonzero((b == bad) & (t == tight)))
        for p, x in enumerate(h):
            total[p] += k * x
    return CohVector(total)


def euler_sequence_terms(fan: Fan, D) -> tuple[CohVector, CohVector]:
    """Cohomology of the middle and right terms of
    0 -> Omega^1(D) -> sum_r O(D - D_r) -> O(D)^{class rank} -> 0."""
    a = _coeffs(fan, D)
    middle = CohVector.zero(fan.dim + 1)
    for i in range(fan.nrays):
        shifted = list(a)
        shifted[i] -= 1
        middle = middle + line_bundle_cohomology(fan, shifted)
    right = line_bundle_cohomology(fan, a).scaled(fan.nrays - fan.dim)
    return middle, right


def euler_degree0_rank(fan: Fan, D) -> int:
    """Rank of H^0(sum_r O(D - D_r)) -> H^0(O(D)) (x) Cl_Q, computed per section character.

    At a character m the image is spanned by the classes of the rays that are
    not tight at m; its dimension is #non-tight + rank(tight rays) - dim.
    """
    a = _coeffs(fan, D)
    total = 0
    for m in section_basis(fan, a):
        _, tight = _status_masks(fan, a, m)
        tight_rows = [fan.rays[i] for i in range(fan.nrays) if tight >> i & 1]
        t = linalg.rank(tight_rows) if tight_rows else 0
        total += fan.nrays - len(tight_rows) + t - fan.dim
    return total


def _cotangent_via_euler(fan: Fan, a: Sequence[int], pins: dict) -> CohVector:
    from .exactseq import ChaseProblem

    middle, right = euler_sequence_terms(fan, a)
    prob = ChaseProblem()
    n = fan.dim + 1
    omega = [prob.var(f"h{i}(Omega1(D))") for i in range(n)]
    rank0 = euler_degree0_rank(fan, a)
    # long exact sequence 0 -> H^0(A) -> H^0(B) -> H^0(C) -> H^1(A) -> ...
    seq = []
    for i in range(n):
        seq += [omega[i], middle[i], right[i]]
    prob.add_exact(seq)
    prob.add_equal(omega[0], middle[0] - rank0)
    if "chi" in pins:
        prob.add_linear({v: (-1) ** i for i, v in enumerate(omega)}, pins["chi"])
    for deg in pins.get("vanishing", ()):
        prob.add_equal(omega[deg], 0)
    sol = prob.solve()
    return sol.vector(omega)


# ---------------------------------------------------------------------------
# GIT presentation


def fan_from_weights(weights: Sequence[Sequence[int]], stability: Sequence[int], name: str = "") -> tuple[Fan, DivisorClassLattice]:
    """Fan of the GIT quotient of affine space by a torus with the given weight matrix.

    The cone on the complement of J is in the fan iff the stability vector
    lies in the interior of the cone spanned by the weight columns in J.
    """
    W = [list(map(int, row)) for row in weights]
    r, n = len(W), len(W[0])
    if linalg.rank(W) != r:
        raise ValueError("weight matrix must have full row rank")
    D, S, T = linalg.smith(W)
    if any(abs(D[i][i]) != 1 for i in range(r)):
        raise ValueError("weight matrix does not define a torsion-free class group")
    kernel = [[T[i][j] for j in range(r, n)] for i in range(n)]
    d = n - r
    cones = []
    for J in itertools.combinations(range(n), r):
        cols = [[W[k][j] for j in J] for k in range(r)]
        lam = linalg.solve_square(cols, list(stability))
        if lam is None or any(x <= 0 for x in lam):
            continue
        cones.append(tuple(i for i in range(n) if i not in J))
    fan = Fan(d, tuple(tuple(row) for row in kernel), tuple(cones), name=name)
    fan.check_complete()
    lattice = DivisorClassLattice.from_fan(fan, W)
    return fan, lattice


# ---------------------------------------------------------------------------
# fan text format


def parse_matrix(text: str) -> list[list[int]]:
    text = text.strip()
    if not text:
        return []
    return [[int(x) for x in row.replace(",", " ").split()] for row in text.split(";") if row.strip()]


def format_matrix(rows: Iterable[Sequence[int]]) -> str:
    return "; ".join(",".join(str(x) for x in row) for row in rows)


def parse_fan_text(text: str) -> tuple[Fan, DivisorClassLattice]:
    """Read ``key value`` lines: dim, rays, cones, optional class_projection, or weights + stability."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        fields[key] = value.strip()
    if "weights" in fields:
        stab = [int(x) for x in fields.get("stability", "").replace(",", " ").split()]
        return fan_from_weights(parse_matrix(fields["weights"]), stab)
    try:
        dim = int(fields["dim"])
        rays = parse_matrix(fields["rays"])
        cones = [[int(x) for x in c] for c in parse_matrix(fields["cones"])]
    except KeyError as exc:
        raise ValueError(f"fan text is missing field {exc.args[0]!r}") from None
    fan = Fan(dim, tuple(map(tuple, rays)), tuple(map(tuple, cones)))
    proj = parse_matrix(fields["class_projection"]) if "class_projection" in fields else None
    return fan, DivisorClassLattice.from_fan(fan, proj)


def format_fan_text(fan: Fan, lattice: DivisorClassLattice | None = None) -> str:
    lines = [f"dim {fan.dim}", f"rays {format_matrix(fan.rays)}", f"cones {format_matrix(fan.max_cones)}"]
    if lattice is not None:
        lines.append(f"class_projection {format_matrix(lattice.projection)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# small constructions used by models and tests


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [c for c in itertools.combinations(range(n + 1), n)]
    return Fan(n, tuple(rays), tuple(cones), name=f"P{n}")


def product(f1: Fan, f2: Fan) -> Fan:
    d = f1.dim + f2.dim
    rays = [tuple(r) + (0,) * f2.dim for r in f1.rays] + [(0,) * f1.dim + tuple(r) for r in f2.rays]
    off = f1.nrays
    cones = [tuple(c1) + tuple(i + off for i in c2) for c1 in f1.max_cones for c2 in f2.max_cones]
    return Fan(d, tuple(rays), tuple(cones), name=f"{f1.name}x{f2.name}")


def star_subdivision(fan: Fan, cone: Sequence[int]) -> Fan:
    """Blow up the orbit closure of ``cone`` (adds the sum of its rays)."""
    if not fan.simplicial:
        raise ValueError("star subdivision is only implemented for simplicial fans")
    cone = tuple(sorted(cone))
    new = tuple(sum(fan.rays[i][k] for i in cone) for k in range(fan.dim))
    g = 0
    for x in new:
        g = gcd(g, x)
    new = tuple(x // g for x in new)
    idx = fan.nrays
    cones = []
    for c in fan.max_cones:
        if set(cone) <= set(c):
            for i in cone:
                cones.append(tuple(sorted([j for j in c if j != i] + [idx])))
        else:
            cones.append(c)
    return Fan(fan.dim, fan.rays + (new,), tuple(cones), name=fan.name + "+")


def demazure_roots(fan: Fan) -> int:
    """Number of Demazure roots: m with <m,u_r> = -1 for one ray and >= 0 for all others."""
    count = 0
    for i in range(fan.nrays):
        a = [0] * fan.nrays
        a[i] = 1
        for m in section_basis(fan, a):
            if sum(x * y for x, y in zip(m, fan.rays[i])) == -1:
                count += 1
    return count

