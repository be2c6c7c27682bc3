"""The bundled dataset: classification records, expected rows, surfaces and models.

The file format is line oriented so that every number can be checked by eye::

    fanohkr-dataset 1

    family 2-8
    invariants c1cubed=14 h12=9 dimaut0=0 jumps=no
    expected 0 18 3 1 1 10
    model toric
      note key variety of the double cover of Bl_p P^3
      dim 4
      rays -1,-1,-1,1; 0,0,0,1; ...
      cones 1,2,3,4,5; 0,2,4,5; ...
      class_projection 1,-1,1,1,1,0; 1,1,0,0,0,1
      sections 2,2
    endmodel
    end

    surface Bl8
    ksquared 1
    triple 0 8 2
    end

Homogeneous models carry ``factors`` and ``bundle`` lines in the bwb grammar
plus an optional ``printed_codim``; special models carry a single ``tag``.
Lines starting with ``#`` are comments; inside a bundle string ``#`` is the
box product, so trailing comments are not supported.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import bwb, toric
from .errors import FanoHKRError, ParseError, ValidationError
from .invariants import (
    ClassificationRecord,
    FamilyId,
    Parallelogram,
    all_family_ids,
    chi_checks,
)
from .pipeline import FamilyModel, HomogeneousModel, SpecialModel, ToricModel, surface_table

FORMAT_VERSION = 1
HEADER = "fanohkr-dataset"
DATA_ENV = "FANOHKR_DATA"
DEFAULT_PATH = Path(__file__).with_name("data") / "fano.dat"


@dataclass
class FamilyEntry:
    record: ClassificationRecord
    expected: Parallelogram
    models: list[FamilyModel] = field(default_factory=list)

    @property
    def id(self) -> FamilyId:
        return self.record.id


@dataclass(frozen=True)
class SurfaceEntry:
    name: str
    k_squared: int
    triple: tuple[int, int, int]


@dataclass
class Dataset:
    version: int
    records: list[FamilyEntry]
    surfaces: list[SurfaceEntry] = field(default_factory=list)

    def __post_init__(self):
        self._index = {e.id: e for e in self.records}

    def entry(self, fid: FamilyId | str) -> FamilyEntry:
        key = FamilyId.parse(fid) if isinstance(fid, str) else fid
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"family {key} is not in the dataset") from None

    def ids(self) -> list[FamilyId]:
        return [e.id for e in self.records]


# ---------------------------------------------------------------------------
# parsing


def _kv(fields: list[str], line: int) -> dict[str, str]:
    out = {}
    for f in fields:
        key, eq, value = f.partition("=")
        if not eq:
            raise ParseError(line, f"expected key=value, got {f!r}")
        out[key] = value
    return out


def _ints(text: str, line: int, count: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(line, f"expected integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise ParseError(line, f"expected {count} integers, got {len(vals)}")
    return vals


def _bool(text: str, line: int) -> bool:
    if text in ("yes", "true", "1"):
        return True
    if text in ("no", "false", "0"):
        return False
    raise ParseError(line, f"expected yes or no, got {text!r}")


def _build_model(fid: FamilyId, kind: str, fields: dict[str, str], line: int) -> FamilyModel:
    try:
        if kind == "special":
            data = SpecialModel(fields["tag"])
        elif kind == "homogeneous":
            printed = fields.get("printed_codim")
            data = HomogeneousModel(
                tuple(bwb.parse_factors(fields["factors"])),
                fields.get("bundle", ""),
                int(printed) if printed else None,
            )
        elif kind == "toric":
            dim = int(fields["dim"])
            rays = toric.parse_matrix(fields["rays"])
            cones = toric.parse_matrix(fields["cones"])
            fan = toric.Fan(dim, tuple(map(tuple, rays)), tuple(map(tuple, cones)), name=str(fid))
            proj = toric.parse_matrix(fields["class_projection"]) if "class_projection" in fields else None
            lattice = toric.DivisorClassLattice.from_fan(fan, proj)
            sections = tuple(tuple(r) for r in toric.parse_matrix(fields.get("sections", "")))
            data = ToricModel(fan, lattice, sections, fields.get("note", ""))
        else:
            raise ParseError(line, f"unknown model kind {kind!r}")
    except KeyError as exc:
        raise ParseError(line, f"{kind} model is missing {exc.args[0]!r}") from None
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(line, f"bad {kind} model: {exc}") from None
    return FamilyModel(fid, data)


def parse_text(text: str, validate_models: bool = True) -> Dataset:
    lines = text.splitlines()
    pos = 0

    def next_line():
        nonlocal pos
        while pos < len(lines):
            pos += 1
            raw = lines[pos - 1].strip()
            if raw and not raw.startswith("#"):
                return pos, raw
        return pos, None

    n, head = next_line()
    if head is None:
        raise ParseError(n, "empty dataset file")
    parts = head.split()
    if len(parts) != 2 or parts[0] != HEADER:
        raise ParseError(n, f"expected '{HEADER} <version>' header")
    if parts[1] != str(FORMAT_VERSION):
        raise ParseError(n, f"unsupported dataset version {parts[1]}")

    records: list[FamilyEntry] = []
    surfaces: list[SurfaceEntry] = []
    while True:
        n, line = next_line()
        if line is None:
            break
        key, _, rest = line.partition(" ")
        if key == "family":
            records.append(_parse_family(rest.strip(), n, next_line))
        elif key == "surface":
            surfaces.append(_parse_surface(rest.strip(), n, next_line))
        else:
            raise ParseError(n, f"expected 'family' or 'surface', got {key!r}")
    ds = Dataset(FORMAT_VERSION, records, surfaces)
    validate(ds, models=validate_models)
    return ds


def _parse_family(fid_text: str, start: int, next_line) -> FamilyEntry:
    try:
        fid = FamilyId.parse(fid_text)
    except ValueError as exc:
        raise ParseError(start, str(exc)) from None
    inv = expected = None
    inv_line = start
    models = []
    while True:
        n, line = next_line()
        if line is None:
            raise ParseError(n, f"family {fid} is not closed by 'end'")
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "end":
            break
        if key == "invariants":
            inv, inv_line = _kv(rest.split(), n), n
        elif key == "expected":
            expected = _ints(rest, n, 6)
        elif key == "model":
            fields: dict[str, str] = {}
            mstart = n
            while True:
                n, mline = next_line()
                if mline is None:
                    raise ParseError(n, "model is not closed by 'endmodel'")
                if mline == "endmodel":
                    break
                mkey, _, mrest = mline.partition(" ")
                if mkey in fields:
                    raise ParseError(n, f"repeated model field {mkey!r}")
                fields[mkey] = mrest.strip()
            models.append(_build_model(fid, rest, fields, mstart))
        else:
            raise ParseError(n, f"unknown family field {key!r}")
    if inv is None or expected is None:
        raise ParseError(start, f"family {fid} needs both 'invariants' and 'expected'")
    try:
        rec = ClassificationRecord(
            fid,
            int(inv["c1cubed"]),
            int(inv["h12"]),
            int(inv["dimaut0"]),
            _bool(inv.get("jumps", "no"), inv_line),
        )
    except KeyError as exc:
        raise ParseError(inv_line, f"missing invariant {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ValidationError(fid, str(exc)) from None
    try:
        pg = Parallelogram(*expected)
    except ValueError as exc:
        raise ValidationError(fid, str(exc)) from None
    return FamilyEntry(rec, pg, models)


def _parse_surface(name: str, start: int, next_line) -> SurfaceEntry:
    k2 = triple = None
    while True:
        n, line = next_line()
        if line is None:
            raise ParseError(n, f"surface {name} is not closed by 'end'")
        key, _, rest = line.partition(" ")
        if key == "end":
            break
        if key == "ksquared":
            k2 = _ints(rest, n, 1)[0]
        elif key == "triple":
            triple = tuple(_ints(rest, n, 3))
        else:
            raise ParseError(n, f"unknown surface field {key!r}")
    if k2 is None or triple is None:
        raise ParseError(start, f"surface {name} needs 'ksquared' and 'triple'")
    return SurfaceEntry(name, k2, triple)


def parse(path: str | os.PathLike, validate_models: bool = True) -> Dataset:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"dataset file {p} does not exist")
    return parse_text(p.read_text(), validate_models)


def default_path(config: dict | None = None) -> Path:
    """Dataset location: config key ``data``, then the environment, then the bundled file."""
    if config and config.get("data"):
        return Path(config["data"])
    if os.environ.get(DATA_ENV):
        return Path(os.environ[DATA_ENV])
    return DEFAULT_PATH


def load_default(validate_models: bool = True) -> Dataset:
    return parse(default_path(), validate_models)


# ---------------------------------------------------------------------------
# validation


def validate(ds: Dataset, models: bool = True) -> None:
    seen = set()
    for e in ds.records:
        if e.id in seen:
            raise ValidationError(e.id, "duplicate family id")
        seen.add(e.id)
        names = ("chi(T)", "chi(wedge^2 T)", "pv03 = c1^3/2 + 3")
        for name, ok in zip(names, chi_checks(e.record, e.expected)):
            if not ok:
                raise ValidationError(e.id, f"expected row {e.expected.as_tuple()} violates {name}")
        if e.expected.pv01 != e.record.dim_aut0:
            raise ValidationError(e.id, "pv01 differs from dim Aut^0")
        if models:
            for m in e.models:
                if m.id != e.id:
                    raise ValidationError(e.id, f"model belongs to {m.id}")
                try:
                    m.validate()
                except (ValueError, FanoHKRError) as exc:
                    raise ValidationError(e.id, f"{m.kind} model: {exc}") from None
    names = set()
    for s in ds.surfaces:
        if s.name in names:
            raise ValidationError(s.name, "duplicate surface")
        names.add(s.name)
        h0t, h1t, h0w = s.triple
        if h0t - h1t != 2 * s.k_squared - 10 or h0w != s.k_squared + 1:
            raise ValidationError(s.name, f"triple {s.triple} violates surface Riemann-Roch")
        try:
            stored = surface_table(s.name)
        except ValueError:
            continue
        if stored != s.triple:
            raise ValidationError(s.name, f"triple {s.triple} differs from the built-in table {stored}")


# ---------------------------------------------------------------------------
# serialisation


def _model_lines(m: FamilyModel) -> list[str]:
    d = m.data
    out = [f"model {m.kind}"]
    if isinstance(d, SpecialModel):
        out.append(f"  tag {d.tag}")
    elif isinstance(d, HomogeneousModel):
        out.append(f"  factors {bwb.format_factors(d.factors)}")
        out.append(f"  bundle {d.bundle}".rstrip())
        if d.printed_codim is not None:
            out.append(f"  printed_codim {d.printed_codim}")
    else:
        if d.note:
            out.append(f"  note {d.note}")
        out.append(f"  dim {d.fan.dim}")
        out.append(f"  rays {toric.format_matrix(d.fan.rays)}")
        out.append(f"  cones {toric.format_matrix(d.fan.max_cones)}")
        out.append(f"  class_projection {toric.format_matrix(d.lattice.projection)}")
        out.append(f"  sections {toric.format_matrix(d.sections)}".rstrip())
    out.append("endmodel")
    return out


def serialize(ds: Dataset) -> str:
    out = [f"{HEADER} {ds.version}", ""]
    for e in ds.records:
        r = e.record
        out.append(f"family {r.id}")
        out.append(
            f"invariants c1cubed={r.c1_cubed} h12={r.h12} dimaut0={r.dim_aut0} "
            f"jumps={'yes' if r.aut_jumps else 'no'}"
        )
        out.append("expected " + " ".join(map(str, e.expected.as_tuple())))
        for m in e.models:
            out.extend(_model_lines(m))
        out.append("end")
        out.append("")
    for s in ds.surfaces:
        out += [f"surface {s.name}", f"ksquared {s.k_squared}", "triple " + " ".join(map(str, s.triple)), "end", ""]
    return "\n".join(out)


# ---------------------------------------------------------------------------
# coverage


@dataclass
class CoverageReport:
    by_kind: dict[str, int]
    families_with_models: list[FamilyId]
    missing: list[FamilyId]
    multiple_models: list[FamilyId]
    codim_discrepancies: list[tuple[FamilyId, int, int]]

    def lines(self) -> list[str]:
        out = [f"{k}: {v} models" for k, v in sorted(self.by_kind.items())]
        out.append(f"families with a model: {len(self.families_with_models)}")
        out.append(f"families without a model: {len(self.missing)}")
        out.append("several models (engine agreement): " + ", ".join(map(str, self.multiple_models)))
        for fid, printed, stored in self.codim_discrepancies:
            out.append(f"{fid}: printed codimension {printed}, bundle rank {stored}")
        return out


def coverage_report(ds: Dataset, universe: Iterable[FamilyId] | None = None) -> CoverageReport:
    """Which families can be computed, and which need attention.

    ``universe`` defaults to all 105 family ids, so an empty dataset reports
    every family as missing.
    """
    universe = list(universe) if universe is not None else all_family_ids()
    present = {e.id: e for e in ds.records}
    by_kind: dict[str, int] = {}
    with_models, missing, multiple, codims = [], [], [], []
    for fid in universe:
        e = present.get(fid)
        if e is None or not e.models:
            missing.append(fid)
            continue
        with_models.append(fid)
        if len(e.models) > 1:
            multiple.append(fid)
        for m in e.models:
            by_kind[m.kind] = by_kind.get(m.kind, 0) + 1
            d = m.data
            if isinstance(d, HomogeneousModel) and d.printed_codim is not None and d.printed_codim != d.codim:
                codims.append((fid, d.printed_codim, d.codim))
    return CoverageReport(by_kind, with_models, missing, multiple, codims)
