"""Regenerate src/fanohkr/data/fano.dat from the transcription tables below.

The expected rows are transcribed by hand, one per family, in the column order
pv01 pv11 pv02 pv12 pv22 pv03; a trailing * on pv01 marks a jump of the
automorphism group dimension inside the family. The numerical invariants are
derived from each row: c1^3 = 2 (pv03 - 3), dim Aut^0 = pv01 and h^{1,2} from
chi(T_X) = pv01 - pv11. The loader then checks the independent chi(wedge^2 T)
identity on every row.

Toric fans are written out with explicit rays, cones and class projection so
the data file never depends on this script. Run from the repository root:

    python3 scripts/build_dataset.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fanohkr import families, toric  # noqa: E402
from fanohkr.invariants import ClassificationRecord, FamilyId, Parallelogram  # noqa: E402
from fanohkr.pipeline import FamilyModel, HomogeneousModel, SpecialModel, ToricModel  # noqa: E402
from fanohkr import bwb  # noqa: E402

ROWS = """
1-1 0 68 0 0 35 4
1-2 0 45 0 0 15 5
1-3 0 34 0 0 7 6
1-4 0 27 0 0 3 7
1-5 0 22 0 0 1 8
1-6 0 18 0 0 0 9
1-7 0 15 0 0 0 10
1-8 0 12 0 0 0 11
1-9 0 10 1 0 0 12
1-10 0* 6 3 0 0 14
1-11 0 34 3 0 7 7
1-12 0 19 6 0 1 11
1-13 0 10 10 0 0 15
1-14 0 3 15 0 0 19
1-15 3 0 21 0 0 23
1-16 10 0 35 0 0 30
1-17 15 0 45 0 0 35
2-1 0 36 1 2 7 5
2-2 0 33 0 0 6 6
2-3 0 23 1 3 1 7
2-4 0 21 0 0 0 8
2-5 0 16 1 3 0 9
2-6 0 19 0 0 1 9
2-7 0 14 0 1 0 10
2-8 0 18 3 1 1 10
2-9 0 13 1 0 0 11
2-10 0 11 1 2 0 11
2-11 0 12 3 0 0 12
2-12 0 9 3 0 0 13
2-13 0 8 2 0 0 13
2-14 0 7 1 0 0 13
2-15 0 9 6 0 0 14
2-16 0 7 4 0 0 14
2-17 0 5 5 0 0 15
2-18 0 6 6 0 0 15
2-19 0 5 8 0 0 16
2-20 0* 3 6 0 0 16
2-21 0* 2 8 0 0 17
2-22 0* 1 10 0 0 18
2-23 0 2 11 0 0 18
2-24 0* 1 10 0 0 18
2-25 0 1 13 0 0 19
2-26 1* 0 14 0 0 20
2-27 3 0 18 0 0 22
2-28 4 1 21 0 0 23
2-29 4 0 20 0 0 23
2-30 7 0 26 0 0 26
2-31 7 0 26 0 0 26
2-32 8 0 28 0 0 27
2-33 11 0 34 0 0 30
2-34 11 0 34 0 0 30
2-35 12 0 36 0 0 31
2-36 15 0 42 0 0 34
3-1 0 17 0 2 1 9
3-2 0 11 2 6 0 10
3-3 0 9 0 0 0 12
3-4 0 8 2 3 0 12
3-5 0* 5 3 4 0 13
3-6 0 5 2 0 0 14
3-7 0 4 4 0 0 15
3-8 0* 3 3 0 0 15
3-9 1 6 8 0 0 16
3-10 0* 2 5 0 0 16
3-11 0 2 8 0 0 17
3-12 0* 1 7 0 0 17
3-13 1* 1 9 0 0 18
3-14 1 1 12 0 0 19
3-15 1 0 11 0 0 19
3-16 2 0 13 0 0 20
3-17 3 0 15 0 0 21
3-18 3 0 15 0 0 21
3-19 4 0 17 0 0 22
3-20 4 0 17 0 0 22
3-21 4 0 17 0 0 22
3-22 5 0 19 0 0 23
3-23 6 0 21 0 0 24
3-24 6 0 21 0 0 24
3-25 7 0 23 0 0 25
3-26 8 0 25 0 0 26
3-27 9 0 27 0 0 27
3-28 9 0 27 0 0 27
3-29 10 0 29 0 0 28
3-30 10 0 29 0 0 28
3-31 11 0 31 0 0 29
4-1 0 3 3 0 0 15
4-2 1 2 7 0 0 17
4-3 1 0 8 0 0 18
4-4 2 0 10 0 0 19
4-5 2 0 10 0 0 19
4-6 3 0 12 0 0 20
4-7 4 0 14 0 0 21
4-8 5 0 16 0 0 22
4-9 6 0 18 0 0 23
4-10 7 0 20 0 0 24
4-11 8 0 22 0 0 25
4-12 9 0 24 0 0 26
4-13 0* 1 4 0 0 16
5-1 1 0 5 0 0 17
5-2 5 0 13 0 0 21
5-3 5 0 13 0 0 21
6-1 3 0 6 0 0 18
7-1 3 2 5 6 0 15
8-1 3 4 4 12 0 12
9-1 3 6 3 18 0 9
10-1 3 8 2 24 0 6
"""

# (h^0 T_S, h^1 T_S, h^0 omega_S^dual) and K^2 for the del Pezzo surfaces
SURFACE_ROWS = """
P2 9 8 0 10
P1xP1 8 6 0 9
Bl1 8 6 0 9
Bl2 7 4 0 8
Bl3 6 2 0 7
Bl4 5 0 0 6
Bl5 4 0 2 5
Bl6 3 0 4 4
Bl7 2 0 6 3
Bl8 1 0 8 2
"""

# family, factors, bundle, printed codimension
HOMOGENEOUS = [
    ("1-5", "Gr(2,5)", "O(2)+O(1)^2", 3),
    ("1-6", "Gr(2,5)", "Udual(1)+O(1)", 3),
    ("1-7", "Gr(2,6)", "O(1)^5", 5),
    ("1-8", "Gr(3,6)", "wedge2Udual+O(1)^3", 6),
    ("1-9", "Gr(2,7)", "Qdual(1)+O(1)^2", 7),
    ("1-10", "Gr(3,7)", "(wedge2Udual)^3", 9),
    ("1-15", "Gr(2,5)", "O(1)^3", 3),
    ("2-14", "Gr(2,5)xP(1)", "O(1,0)^3+O(1,1)", 4),
    ("2-17", "Gr(2,4)xP(3)", "Udual#O(1)+O(1,1)+O(1,0)", 4),
    # the printed ambient Gr(2,4) x P^2 has dimension 6; Gr(2,5) x P^2 gives a 3-fold
    ("2-20", "Gr(2,5)xP(2)", "Udual#O(1)+O(1,0)^3", 3),
    ("2-21", "Gr(2,4)xP(4)", "(Udual#O(1))^2+O(1,0)", 5),
    # as printed the O(0,1)^3 summand cuts a point of P^3; the roles of the factors are swapped
    ("2-22", "Gr(2,5)xP(3)", "Q#O(1)+O(1,0)^3", 6),
    ("2-26", "Gr(2,4)xGr(2,5)", "Q#Udual+O(1,0)+O(0,1)^2", 7),
    ("9-1", "P(1)xP(2)xP(1)", "O(2,2,0)", 1),
    # second descriptions used for engine agreement
    ("1-13", "P(4)", "O(3)", None),
    ("1-14", "P(5)", "O(2)^2", None),
    ("1-16", "P(4)", "O(2)", None),
    ("1-17", "P(3)", "", None),
    ("2-32", "P(2)xP(2)", "O(1,1)", None),
    ("2-34", "P(1)xP(2)", "", None),
    ("3-27", "P(1)xP(1)xP(1)", "", None),
    ("4-1", "P(1)xP(1)xP(1)xP(1)", "O(1,1,1,1)", None),
]

SPECIAL = {"1-1": "M1-1", "2-1": "M2-1", "2-3": "M2-3", "4-13": "M4-13", "10-1": "M10-1"}


def products_of_projective(dims, extra=()):
    """Weight matrix of P^{n1} x ... x P^{nk}, optionally with extra weighted columns."""
    cols = []
    for i, n in enumerate(dims):
        cols += [tuple(int(j == i) for j in range(len(dims)))] * (n + 1)
    cols += list(extra)
    return [[c[i] for c in cols] for i in range(len(dims))]


def weighted(ws):
    return [list(ws)]


# family -> (weights, stability, section classes, note)
TORIC_CI = {
    "1-2": (weighted([1] * 5), [1], [(4,)], "quartic in P^4"),
    "1-3": (weighted([1] * 6), [1], [(2,), (3,)], "(2,3) in P^5"),
    "1-4": (weighted([1] * 7), [1], [(2,), (2,), (2,)], "(2,2,2) in P^6"),
    "1-11": (weighted([1, 1, 1, 2, 3]), [1], [(6,)], "sextic in P(1,1,1,2,3)"),
    "1-12": (weighted([1, 1, 1, 1, 2]), [1], [(4,)], "quartic in P(1,1,1,1,2)"),
    "1-13": (weighted([1] * 5), [1], [(3,)], "cubic in P^4"),
    "1-14": (weighted([1] * 6), [1], [(2,), (2,)], "(2,2) in P^5"),
    "1-16": (weighted([1] * 5), [1], [(2,)], "quadric in P^4"),
    "2-2": (products_of_projective([1, 2], [(1, 2)]), [2, 1], [(2, 4)],
            "double cover of P^1 x P^2 branched in a (2,4) divisor"),
    "2-4": (products_of_projective([1, 3]), [1, 1], [(1, 3)], "(1,3) in P^1 x P^3"),
    "2-6": (products_of_projective([2, 2]), [1, 1], [(2, 2)], "(2,2) in P^2 x P^2"),
    "2-7": (products_of_projective([1, 4]), [1, 1], [(0, 2), (1, 2)], "(0,2),(1,2) in P^1 x P^4"),
    "2-24": (products_of_projective([2, 2]), [1, 1], [(1, 2)], "(1,2) in P^2 x P^2"),
    "2-25": (products_of_projective([1, 3]), [1, 1], [(1, 2)], "(1,2) in P^1 x P^3"),
    "2-32": (products_of_projective([2, 2]), [1, 1], [(1, 1)], "(1,1) in P^2 x P^2"),
    "3-1": (products_of_projective([1, 1, 1], [(1, 1, 1)]), [5, 4, 3], [(2, 2, 2)],
            "double cover of (P^1)^3 branched in a (2,2,2) divisor"),
    "3-3": (products_of_projective([1, 1, 2]), [1, 1, 1], [(1, 1, 2)], "(1,1,2) in P^1 x P^1 x P^2"),
    "3-17": (products_of_projective([1, 1, 2]), [1, 1, 1], [(1, 1, 1)], "(1,1,1) in P^1 x P^1 x P^2"),
    "4-1": (products_of_projective([1, 1, 1, 1]), [1, 1, 1, 1], [(1, 1, 1, 1)], "(1,1,1,1) in (P^1)^4"),
    "9-1": ([[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 1, 2]], [1, 1], [(0, 4)], "(0,4) in P^1 x P(1,1,1,2)"),
}

# the worked example for 2-8: the fan is given directly, not by weights
M28 = dict(
    rays=[(-1, -1, -1, 1), (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0), (1, 1, 1, -2)],
    cones=[(1, 2, 3, 4, 5), (0, 2, 4, 5), (0, 1, 3, 4), (0, 1, 2, 4), (0, 1, 2, 3), (0, 3, 4, 5), (0, 2, 3, 5)],
    projection=[[1, -1, 1, 1, 1, 0], [1, 1, 0, 0, 0, 1]],
    sections=[(2, 2)],
)


def _star(fan, rays):
    idx = [fan.rays.index(tuple(r)) for r in rays]
    return toric.star_subdivision(fan, idx)


E1, E2, E3, E0 = (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)


def _surface(rays):
    """Smooth complete 2-dimensional fan with rays listed in cyclic order."""
    n = len(rays)
    return toric.Fan(2, tuple(map(tuple, rays)), tuple(tuple(sorted((i, (i + 1) % n))) for i in range(n)))


def toric_fanos() -> dict[str, toric.Fan]:
    p1 = toric.projective_space(1)
    p2 = toric.projective_space(2)
    p3 = toric.projective_space(3)
    f1 = _surface([(1, 0), (1, 1), (0, 1), (-1, -1)])
    bl2 = _surface([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1)])
    bl3 = _surface([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
    v7 = _star(p3, [E1, E2, E3])
    out = {
        "1-17": p3,
        "2-33": _star(p3, [E1, E2]),
        "2-34": toric.product(p1, p2),
        "2-35": v7,
        "2-36": toric.Fan(3, ((1, 0, 0), (0, 1, 0), (-1, -1, 2), (0, 0, 1), (0, 0, -1)),
                          ((0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 1, 4), (1, 2, 4), (0, 2, 4))),
        "3-27": toric.product(p1, toric.product(p1, p1)),
        "3-28": toric.product(p1, f1),
        "3-29": _star(v7, [(1, 1, 1), E1]),
        "3-30": _star(v7, [E1, E2]),
        "3-31": toric.Fan(3, ((1, 0, 0), (-1, 0, 1), (0, 1, 0), (0, -1, 1), (0, 0, 1), (0, 0, -1)),
                          tuple((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5))),
        "4-10": toric.product(p1, bl2),
        "5-3": toric.product(p1, bl3),
    }
    f325 = _star(_star(p3, [E1, E2]), [E3, E0])
    out["3-25"] = f325
    out["3-26"] = _star(_star(p3, [E1, E2]), [E1, E3, E0])
    out["4-9"] = _star(f325, [(1, 1, 0), E3])
    p1f1 = toric.product(p1, f1)
    out["4-11"] = _star(p1f1, [(1, 0, 0), (0, 1, 1)])
    f233 = out["2-33"]
    out["4-12"] = _star(_star(f233, [(1, 1, 0), E3]), [(1, 1, 0), E0])
    out["5-2"] = _star(_star(f325, [(1, 1, 0), E3]), [(1, 1, 0), E0])
    return out


def _canonical_order(fan: toric.Fan, name: str) -> toric.Fan:
    cones = tuple(sorted(tuple(sorted(c)) for c in fan.max_cones))
    return toric.Fan(fan.dim, fan.rays, cones, name=name)


def build() -> families.Dataset:
    records = {}
    for line in ROWS.strip().splitlines():
        fid, *cells = line.split()
        jumps = cells[0].endswith("*")
        vals = [int(c.rstrip("*")) for c in cells]
        pg = Parallelogram(*vals)
        fam = FamilyId.parse(fid)
        c1 = 2 * (pg.pv03 - 3)
        h12 = c1 // 2 + fam.rho - 18 - pg.pv01 + pg.pv11
        rec = ClassificationRecord(fam, c1, h12, pg.pv01, jumps)
        records[fam] = families.FamilyEntry(rec, pg, [])

    def add(fid, data):
        fam = FamilyId.parse(fid)
        records[fam].models.append(FamilyModel(fam, data))

    for fid, tag in SPECIAL.items():
        add(fid, SpecialModel(tag))
    fan = toric.Fan(4, tuple(M28["rays"]), tuple(M28["cones"]), name="2-8")
    lat = toric.DivisorClassLattice.from_fan(fan, M28["projection"])
    add("2-8", ToricModel(fan, lat, tuple(M28["sections"]), "key variety of the double cover of Bl_p P^3"))
    for fid, (w, theta, secs, note) in TORIC_CI.items():
        fan, lat = toric.fan_from_weights(w, theta, name=fid)
        fan = _canonical_order(fan, fid)
        add(fid, ToricModel(fan, lat, tuple(map(tuple, secs)), note))
    for fid, fan in toric_fanos().items():
        fan = _canonical_order(fan, fid)
        lat = toric.DivisorClassLattice.from_fan(fan)
        add(fid, ToricModel(fan, lat, (), "smooth toric Fano"))
    for fid, factors, bundle, printed in HOMOGENEOUS:
        add(fid, HomogeneousModel(tuple(bwb.parse_factors(factors)), bundle, printed))

    surfaces = []
    for line in SURFACE_ROWS.strip().splitlines():
        name, k2, *triple = line.split()
        surfaces.append(families.SurfaceEntry(name, int(k2), tuple(map(int, triple))))
    return families.Dataset(families.FORMAT_VERSION, [records[k] for k in sorted(records)], surfaces)


def main() -> None:
    ds = build()
    families.validate(ds)
    path = ROOT / "src" / "fanohkr" / "data" / "fano.dat"
    path.write_text(families.serialize(ds))
    print(f"wrote {path} with {len(ds.records)} records and {sum(len(e.models) for e in ds.records)} models")


if __name__ == "__main__":
    main()
