import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanohkr.cohvector import CohVector
from fanohkr.errors import ConsistencyError
from fanohkr.invariants import (
    ClassificationRecord,
    FamilyId,
    Parallelogram,
    all_family_ids,
    assemble_parallelogram,
    chi_anticanonical,
    chi_tangent,
    chi_wedge2_tangent,
    format_parallelogram,
    hochschild_homology_dims,
)


def test_family_ids():
    assert len(all_family_ids()) == 105
    assert FamilyId.parse("MM(2,8)") == FamilyId(2, 8)
    assert str(FamilyId.parse("10-1")) == "10-1"
    with pytest.raises(ValueError):
        FamilyId(1, 18)
    with pytest.raises(ValueError):
        FamilyId.parse("two-eight")


def test_p3_closed_forms():
    rec = ClassificationRecord(FamilyId(1, 17), 64, 0, 15)
    assert chi_tangent(rec) == 15
    assert chi_wedge2_tangent(rec) == 45
    assert chi_anticanonical(rec) == 35
    pg = assemble_parallelogram(rec, CohVector([45, 0, 0, 0]))
    assert pg.as_tuple() == (15, 0, 45, 0, 0, 35)
    assert pg.hochschild() == (1, 15, 45, 35, 0, 0, 0)


def test_assembly_rejects_wrong_euler_characteristic():
    rec = ClassificationRecord(FamilyId(2, 8), 14, 9, 0)
    with pytest.raises(ConsistencyError):
        assemble_parallelogram(rec, CohVector([3, 1, 2]))
    assert assemble_parallelogram(rec, CohVector([3, 1, 1])).as_tuple() == (0, 18, 3, 1, 1, 10)


def test_record_validation():
    with pytest.raises(ValueError):
        ClassificationRecord(FamilyId(1, 1), 3, 0, 0)
    with pytest.raises(ValueError):
        Parallelogram(0, -1, 0, 0, 0, 0)


def test_hochschild_homology_of_p3():
    rec = ClassificationRecord(FamilyId(1, 17), 64, 0, 15)
    assert hochschild_homology_dims(rec) == (0, 0, 0, 4, 0, 0, 0)


def test_layout_has_apex_and_six_numbers():
    text = format_parallelogram(Parallelogram(0, 18, 3, 1, 1, 10))
    rows = text.splitlines()
    assert len(rows) == 7
    assert rows[0].split() == ["HH^0", "1"]
    assert rows[2].split()[-2:] == ["18", "3"]
    assert rows[3].split()[-2:] == ["1", "10"]


@given(st.integers(1, 32), st.integers(0, 10), st.integers(0, 60))
def test_closed_forms_sum_like_hodge_data(half_degree, rho_index, h12):
    rho = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10][rho_index % 10]
    rec = ClassificationRecord(FamilyId(rho, 1), 2 * half_degree, h12, 0)
    # chi(T) + chi(wedge^2 T) depends only on the degree
    assert chi_tangent(rec) + chi_wedge2_tangent(rec) == 3 * half_degree - 36
