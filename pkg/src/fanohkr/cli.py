"""Command line interface.

    fanohkr compute 2-8 [--engine auto|toric|homogeneous|special] [--trace] [--json]
    fanohkr verify-all [--only RHO] [--parallel N] [--report PATH]
    fanohkr bwb "Gr(2,4)xP(3)" "cotangent"
    fanohkr toric p2.fan "1,1,1" [--cotangent]
    fanohkr coverage
    fanohkr surfaces

Exit codes: 0 success, 1 bad input, 2 no model, 3 underdetermined (intervals
are still printed), 4 infeasible chase, failed anchor or failed verification.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bwb, families, pipeline, toric
from .cohvector import CohVector, Unknown
from .errors import (
    AnchorMismatch,
    ConsistencyError,
    FanoHKRError,
    Infeasible,
    NoModel,
    ParseError,
    ValidationError,
)
from .invariants import FamilyId, format_parallelogram

SCHEMA = "fanohkr.output/1"
ENTRY_NAMES = ("pv01", "pv11", "pv02", "pv12", "pv22", "pv03")

EXIT_OK, EXIT_INPUT, EXIT_NO_MODEL, EXIT_UNDERDETERMINED, EXIT_FAILURE = 0, 1, 2, 3, 4


def _entry_json(e):
    if isinstance(e, Unknown):
        return [e.lo, e.hi]
    return e


def _vector_json(v: CohVector) -> list:
    return [_entry_json(e) for e in v]


def output_record(report: pipeline.ComputationReport, with_trace: bool = False) -> dict:
    """The machine-readable form of one computation (see docs/output-schema.json)."""
    rec = {
        "schema": SCHEMA,
        "family": str(report.family),
        "parallelogram": {n: _entry_json(e) for n, e in zip(ENTRY_NAMES, report.entries)},
        "determinacy": "Determined" if report.determined else "Underdetermined",
        "engine": report.engine,
        "chi_checks": list(report.checks) if report.checks is not None else None,
    }
    if with_trace:
        rec["trace"] = [{"label": label, "vector": _vector_json(v)} for label, v in report.trace]
    return rec


def read_config(path: str | None) -> dict:
    """Optional INI file with a [fanohkr] section; only the ``data`` key is read."""
    if not path:
        return {}
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise FileNotFoundError(f"config file {path} not found")
    return dict(cp["fanohkr"]) if cp.has_section("fanohkr") else {}


def _dataset_path(args) -> Path:
    if args.data:
        return Path(args.data)
    return families.default_path(read_config(args.config))


# ---------------------------------------------------------------------------
# compute


def cmd_compute(args) -> int:
    ds = families.parse(_dataset_path(args))
    try:
        fid = FamilyId.parse(args.family)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        entry = ds.entry(fid)
        report = pipeline.compute_best(entry.models, entry.record, args.engine, keep_trace=args.trace)
    except (KeyError, NoModel) as exc:
        print(f"error: {fid}: {exc}", file=sys.stderr)
        return EXIT_NO_MODEL
    except (Infeasible, AnchorMismatch, ConsistencyError) as exc:
        print(f"error: {fid}: {exc}", file=sys.stderr)
        for line in getattr(exc, "trace", []):
            print(f"  {line}", file=sys.stderr)
        return EXIT_FAILURE
    if args.json:
        print(json.dumps(output_record(report, args.trace), indent=2))
    else:
        print(f"{fid} ({report.engine} engine, {'determined' if report.determined else 'underdetermined'})")
        print(format_parallelogram(report.entries))
        if args.trace:
            print()
            for label, vec in report.trace:
                print(f"  {label}: {vec}")
    return EXIT_OK if report.determined else EXIT_UNDERDETERMINED


# ---------------------------------------------------------------------------
# verify-all

_WORKER_DS: families.Dataset | None = None


def _init_worker(path: str) -> None:
    global _WORKER_DS
    _WORKER_DS = families.parse(path)


def _verify_one(fid_text: str) -> tuple[str, str, str]:
    return verify_family(_WORKER_DS, FamilyId.parse(fid_text))


def verify_family(ds: families.Dataset, fid: FamilyId) -> tuple[str, str, str]:
    """(family, status, detail) with status PASS, FAIL or SKIPPED."""
    entry = ds.entry(fid)
    if not entry.models:
        return str(fid), "SKIPPED", "no model"
    try:
        report = pipeline.compute_best(entry.models, entry.record, keep_trace=False)
    except FanoHKRError as exc:
        return str(fid), "FAIL", f"{type(exc).__name__}: {exc}"
    expected = entry.expected.as_tuple()
    if report.determined:
        if tuple(report.entries) == expected:
            return str(fid), "PASS", f"{report.engine} {expected}"
        return str(fid), "FAIL", f"{report.engine} computed {tuple(report.entries)}, expected {expected}"
    inside = all(
        (e.lo <= x and (e.hi is None or x <= e.hi)) if isinstance(e, Unknown) else e == x
        for e, x in zip(report.entries, expected)
    )
    if inside:
        shown = tuple(str(e) for e in report.entries)
        return str(fid), "SKIPPED", f"underdetermined {report.engine} {shown}"
    return str(fid), "FAIL", f"{report.engine} bounds exclude the expected row {expected}"


def verify_all(ds: families.Dataset, path: Path, only: int | None = None, parallel: int = 1) -> list[tuple[str, str, str]]:
    ids = [e.id for e in ds.records if only is None or e.id.rho == only]
    if parallel > 1:
        with ProcessPoolExecutor(parallel, initializer=_init_worker, initargs=(str(path),)) as pool:
            return list(pool.map(_verify_one, [str(i) for i in ids]))
    return [verify_family(ds, i) for i in ids]


def cmd_verify_all(args) -> int:
    path = _dataset_path(args)
    ds = families.parse(path)
    rows = verify_all(ds, path, args.only, args.parallel)
    lines = [f"{fid:>5}  {status:<7}  {detail}" for fid, status, detail in rows]
    counts = {s: sum(1 for _, st, _ in rows if st == s) for s in ("PASS", "FAIL", "SKIPPED")}
    lines.append(f"families {len(rows)}: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    text = "\n".join(lines)
    print(text)
    if args.report:
        Path(args.report).write_text(text + "\n")
    return EXIT_FAILURE if counts["FAIL"] else EXIT_OK


# ---------------------------------------------------------------------------
# direct engine access


def cmd_bwb(args) -> int:
    try:
        factors = bwb.parse_factors(args.factors)
        e = bwb.parse_bundle(args.bundle, factors)
    except bwb.GrammarError as exc:
        print(f"error: bundle {args.bundle!r}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.wedge is not None:
        e = bwb.exterior_power(e, args.wedge)
    print(bwb.cohomology(factors, e))
    return EXIT_OK


def cmd_toric(args) -> int:
    try:
        fan, _ = toric.parse_fan_text(Path(args.fan).read_text())
        coeffs = [int(x) for x in args.coeffs.replace(",", " ").split()]
        if len(coeffs) != fan.nrays:
            raise ValueError(f"expected {fan.nrays} coefficients, got {len(coeffs)}")
    except (OSError, ValueError, FanoHKRError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.cotangent:
        print(toric.cotangent_twist_cohomology(fan, coeffs))
    else:
        print(toric.line_bundle_cohomology(fan, coeffs))
    return EXIT_OK


def cmd_coverage(args) -> int:
    ds = families.parse(_dataset_path(args))
    for line in families.coverage_report(ds).lines():
        print(line)
    return EXIT_OK


def cmd_surfaces(args) -> int:
    ds = families.parse(_dataset_path(args))
    for s in ds.surfaces:
        h0t, h1t, h0w = s.triple
        print(f"{s.name:>6}  K^2={s.k_squared}  h0T={h0t} h1T={h1t} h0(-K)={h0w}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanohkr", description="Polyvector parallelograms of Fano 3-folds.")
    p.add_argument("--data", help="dataset file (default: bundled, or $FANOHKR_DATA)")
    p.add_argument("--config", help="INI file with a [fanohkr] section, key 'data'")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute the parallelogram of one family")
    c.add_argument("family", help="family id such as 2-8")
    c.add_argument("--engine", default="auto", choices=("auto",) + pipeline.ENGINES)
    c.add_argument("--trace", action="store_true", help="show intermediate cohomology vectors")
    c.add_argument("--json", action="store_true", help="machine-readable output")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify-all", help="compare every computable family with its expected row")
    v.add_argument("--only", type=int, metavar="RHO", help="restrict to one Picard rank")
    v.add_argument("--parallel", type=int, default=1, metavar="N")
    v.add_argument("--report", metavar="PATH", help="also write the report to a file")
    v.set_defaults(func=cmd_verify_all)

    b = sub.add_parser("bwb", help="cohomology of a homogeneous bundle")
    b.add_argument("factors", help='ambient such as "Gr(2,4)xP(3)"')
    b.add_argument("bundle", help='bundle such as "Udual#O(1)+O(1,1)"')
    b.add_argument("--wedge", type=int, help="take this exterior power first")
    b.set_defaults(func=cmd_bwb)

    t = sub.add_parser("toric", help="cohomology of a toric divisor or twisted cotangent sheaf")
    t.add_argument("fan", help="fan file with dim/rays/cones lines")
    t.add_argument("coeffs", help='torus-invariant divisor, e.g. "1,1,1"')
    t.add_argument("--cotangent", action="store_true", help="twist the cotangent sheaf by the divisor")
    t.set_defaults(func=cmd_toric)

    sub.add_parser("coverage", help="summarise the bundled models").set_defaults(func=cmd_coverage)
    sub.add_parser("surfaces", help="print the del Pezzo table").set_defaults(func=cmd_surfaces)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
