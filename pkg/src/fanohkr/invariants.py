"""Classification records, polyvector parallelograms and closed-form Euler characteristics.

For a Fano 3-fold X only six polyvector dimensions pv^{p,q} = h^p(X, wedge^q T_X)
can be nonzero. Of these, the q = 0, 1, 3 columns follow from the numerical
invariants (c1^3, rho, h^{1,2}, dim Aut^0) alone; the bivector column is the
hard part and is computed by the engines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .cohvector import CohVector
from .errors import ConsistencyError

FAMILY_COUNTS = {1: 17, 2: 36, 3: 31, 4: 13, 5: 3, 6: 1, 7: 1, 8: 1, 9: 1, 10: 1}


@dataclass(frozen=True, order=True)
class FamilyId:
    rho: int
    index: int

    def __post_init__(self):
        if self.rho not in FAMILY_COUNTS or not 1 <= self.index <= FAMILY_COUNTS[self.rho]:
            raise ValueError(f"no Fano 3-fold family {self.rho}-{self.index}")

    @classmethod
    def parse(cls, text: str) -> FamilyId:
        m = re.fullmatch(r"\s*(?:MM|M)?\(?\s*(\d+)\s*[-,]\s*(\d+)\s*\)?\s*", text)
        if not m:
            raise ValueError(f"cannot parse family id {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"{self.rho}-{self.index}"


def all_family_ids() -> list[FamilyId]:
    return [FamilyId(r, i) for r, n in sorted(FAMILY_COUNTS.items()) for i in range(1, n + 1)]


@dataclass(frozen=True)
class ClassificationRecord:
    id: FamilyId
    c1_cubed: int
    h12: int
    dim_aut0: int
    aut_jumps: bool = False

    def __post_init__(self):
        if self.c1_cubed % 2 or not 2 <= self.c1_cubed <= 64:
            raise ValueError(f"{self.id}: anticanonical degree {self.c1_cubed} out of range")
        if self.h12 < 0 or self.dim_aut0 < 0:
            raise ValueError(f"{self.id}: negative invariant")

    @property
    def rho(self) -> int:
        return self.id.rho


@dataclass(frozen=True)
class Parallelogram:
    pv01: int
    pv11: int
    pv02: int
    pv12: int
    pv22: int
    pv03: int

    def __post_init__(self):
        for name in ("pv01", "pv11", "pv02", "pv12", "pv22", "pv03"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def as_tuple(self) -> tuple[int, ...]:
        return (self.pv01, self.pv11, self.pv02, self.pv12, self.pv22, self.pv03)

    def hochschild(self) -> tuple[int, ...]:
        """Dimensions of HH^0 .. HH^6 (anti-diagonal sums)."""
        return (1, self.pv01, self.pv11 + self.pv02, self.pv12 + self.pv03, self.pv22, 0, 0)

    def pv(self, p: int, q: int) -> int:
        table = {
            (0, 0): 1, (0, 1): self.pv01, (1, 1): self.pv11, (0, 2): self.pv02,
            (1, 2): self.pv12, (2, 2): self.pv22, (0, 3): self.pv03,
        }
        return table.get((p, q), 0)


def chi_tangent(rec: ClassificationRecord) -> int:
    return rec.c1_cubed // 2 + rec.rho - 18 - rec.h12


def chi_wedge2_tangent(rec: ClassificationRecord) -> int:
    return rec.c1_cubed - 18 - rec.rho + rec.h12


def chi_anticanonical(rec: ClassificationRecord) -> int:
    return rec.c1_cubed // 2 + 3


def h_tangent(rec: ClassificationRecord) -> tuple[int, int]:
    h0 = rec.dim_aut0
    h1 = h0 - chi_tangent(rec)
    if h1 < 0:
        raise ConsistencyError(f"{rec.id}: dim Aut^0 = {h0} gives h^1(T) = {h1} < 0")
    return h0, h1


def hochschild_homology_dims(rec: ClassificationRecord) -> tuple[int, ...]:
    """HH_{-3} .. HH_3, read off the columns of the Hodge diamond."""
    return (0, 0, rec.h12, 2 + 2 * rec.rho, rec.h12, 0, 0)


def assemble_parallelogram(rec: ClassificationRecord, wedge2: CohVector) -> Parallelogram:
    if len(wedge2) == 4 and wedge2[3] == 0:
        wedge2 = CohVector(wedge2.entries[:3])
    if len(wedge2) != 3 or not wedge2.is_known:
        raise ValueError(f"bivector cohomology must be three determined entries, got {wedge2}")
    pv01, pv11 = h_tangent(rec)
    pv02, pv12, pv22 = wedge2.values()
    if pv02 - pv12 + pv22 != chi_wedge2_tangent(rec):
        raise ConsistencyError(
            f"{rec.id}: chi(wedge^2 T) = {chi_wedge2_tangent(rec)} but computed {pv02} - {pv12} + {pv22}"
        )
    return Parallelogram(pv01, pv11, pv02, pv12, pv22, chi_anticanonical(rec))


def chi_checks(rec: ClassificationRecord, pg: Parallelogram) -> tuple[bool, bool, bool]:
    return (
        pg.pv01 - pg.pv11 == chi_tangent(rec),
        pg.pv02 - pg.pv12 + pg.pv22 == chi_wedge2_tangent(rec),
        pg.pv03 == chi_anticanonical(rec),
    )


def format_parallelogram(pg) -> str:
    """Triangular layout with fixed zeros, one row per HH^i.

    Accepts a Parallelogram or six entries in the order pv01 pv11 pv02 pv12
    pv22 pv03; undetermined entries print as intervals.
    """
    pv01, pv11, pv02, pv12, pv22, pv03 = map(str, pg.as_tuple() if isinstance(pg, Parallelogram) else pg)
    rows = [
        ["1"],
        ["0", pv01],
        ["0", pv11, pv02],
        ["0", "0", pv12, pv03],
        ["", "0", pv22, "0"],
        ["", "", "0", "0"],
        ["", "", "", "0"],
    ]
    width = max(len(c) for row in rows for c in row) + 2
    lines = []
    for i, row in enumerate(rows):
        cells = "".join(c.rjust(width) for c in row)
        lines.append(f"HH^{i}  {cells}".rstrip())
    return "\n".join(lines)
