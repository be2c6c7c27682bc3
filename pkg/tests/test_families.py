import pytest

from fanohkr import families
from fanohkr.errors import ParseError, ValidationError
from fanohkr.invariants import FamilyId, all_family_ids
from fanohkr.pipeline import HomogeneousModel


def test_bundled_dataset_shape(dataset):
    assert len(dataset.records) == 105
    assert sorted(dataset.ids()) == all_family_ids()
    assert sum(len(e.models) for e in dataset.records) >= 20
    assert len(dataset.surfaces) == 10


def test_round_trip_is_idempotent(dataset):
    text = families.serialize(dataset)
    again = families.serialize(families.parse_text(text))
    assert text == again


def _replace_expected(text, fid, row):
    out, inside = [], False
    for line in text.splitlines():
        if line == f"family {fid}":
            inside = True
        if inside and line.startswith("expected"):
            line = "expected " + " ".join(map(str, row))
            inside = False
        out.append(line)
    return "\n".join(out)


def test_corrupted_row_is_rejected(dataset):
    text = _replace_expected(families.serialize(dataset), "2-8", (0, 18, 3, 1, 1, 9))
    with pytest.raises(ValidationError) as exc:
        families.parse_text(text, validate_models=False)
    assert exc.value.family == FamilyId(2, 8)


def test_parse_errors_have_line_numbers():
    with pytest.raises(ParseError) as exc:
        families.parse_text("fanohkr-dataset 2\n")
    assert exc.value.line == 1
    with pytest.raises(ParseError) as exc:
        families.parse_text("fanohkr-dataset 1\nfamily 1-1\nexpected 1 2 3\nend\n")
    assert exc.value.line == 3
    with pytest.raises(ParseError):
        families.parse_text("fanohkr-dataset 1\nfamily 1-1\n")


def test_bad_model_is_reported():
    text = "\n".join([
        "fanohkr-dataset 1",
        "family 1-17",
        "invariants c1cubed=64 h12=0 dimaut0=15 jumps=no",
        "expected 15 0 45 0 0 35",
        "model homogeneous",
        "  factors P(4)",
        "  bundle O(1,",
        "endmodel",
        "end",
    ])
    with pytest.raises(ValidationError):
        families.parse_text(text)


def test_homogeneous_ranks_match_codimension(dataset):
    for e in dataset.records:
        for m in e.models:
            if isinstance(m.data, HomogeneousModel):
                assert sum(f.dim for f in m.data.factors) - m.data.codim == 3


def test_coverage_of_bundled_dataset(dataset):
    report = families.coverage_report(dataset)
    assert report.by_kind["special"] == 5
    assert report.by_kind["toric"] >= 18
    assert report.by_kind["homogeneous"] >= 14
    assert (FamilyId(2, 20), 3, 5) in report.codim_discrepancies
    assert FamilyId(9, 1) in report.multiple_models
    assert len(report.missing) + len(report.families_with_models) == 105


def test_coverage_of_empty_dataset():
    report = families.coverage_report(families.Dataset(1, []))
    assert len(report.missing) == 105


def test_zero_bivector_rows_in_higher_picard_rank(dataset):
    zero = {str(e.id) for e in dataset.records if e.expected.pv02 == 0 and e.id.rho >= 2}
    assert zero == {"2-2", "2-4", "2-6", "2-7", "3-1", "3-3"}


def test_default_path_can_be_overridden(monkeypatch, tmp_path):
    target = tmp_path / "x.dat"
    monkeypatch.setenv(families.DATA_ENV, str(target))
    assert families.default_path() == target
    assert families.default_path({"data": "y.dat"}).name == "y.dat"
    monkeypatch.delenv(families.DATA_ENV)
    assert families.default_path() == families.DEFAULT_PATH
